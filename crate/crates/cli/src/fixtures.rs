//! Example documents compiled into the binary.

pub const FIXTURES: &[(&str, &str)] = &[
    ("a1", include_str!("../fixtures/a1.json")),
    ("a1-to-point", include_str!("../fixtures/a1-to-point.json")),
    ("a2", include_str!("../fixtures/a2.json")),
    ("a2-git", include_str!("../fixtures/a2-git.json")),
    ("a2-mod-z2", include_str!("../fixtures/a2-mod-z2.json")),
    ("a2-mod-z2-morphism", include_str!("../fixtures/a2-mod-z2-morphism.json")),
    ("circle-arc", include_str!("../fixtures/circle-arc.json")),
    ("circle-delta", include_str!("../fixtures/circle-delta.json")),
    ("doubled-line", include_str!("../fixtures/doubled-line.json")),
    ("doubled-line-to-a1", include_str!("../fixtures/doubled-line-to-a1.json")),
    ("half-plane-cofib", include_str!("../fixtures/half-plane-cofib.json")),
    ("half-plane-p", include_str!("../fixtures/half-plane-p.json")),
    ("kp1", include_str!("../fixtures/kp1.json")),
    ("p1", include_str!("../fixtures/p1.json")),
    ("p1-doubling", include_str!("../fixtures/p1-doubling.json")),
    ("p1xp1", include_str!("../fixtures/p1xp1.json")),
];

pub fn get(name: &str) -> Option<&'static str> {
    let name = name.strip_suffix(".json").unwrap_or(name);
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}
