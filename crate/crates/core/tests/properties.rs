mod common;

use ccc_core::arrangement::{cells, CellMode, Hyperplane};
use ccc_core::cone::Cone;
use ccc_core::lattice::{cokernel_group, saturate, saturation_index, smith_normal_form};
use ccc_core::linalg::{frac, rank_int, Rat};
use ccc_core::polyhedron::Region;
use ccc_core::skeleton::{CovectorPoint, Skeleton};
use ccc_core::stacky::{from_gs, to_gs};
use ccc_core::{
    complete_fan, confun_equal, convolve, decide_right_functorial, fan_relate, fltz_skeleton, fixtures, pushforward_affine,
    skeleton_subset, smooth_refine, star_quotient, unit_chi, ConFun, Fan, FanMorphism, FanRelation, Int, IntMatrix,
    LatticeMap, StackyFan, StackyMorphism,
};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-5i64..=5, rows * cols).prop_map(move |v| {
        let data = v.chunks(cols.max(1)).take(rows).map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect();
        IntMatrix::from_rows(data, cols).unwrap()
    })
}

fn unimodular<R: Rng>(rng: &mut R, n: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    for _ in 0..6 {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            continue;
        }
        let k = Int::from(rng.gen_range(-2..=2));
        for c in 0..n {
            let v = m.get(i, c) + &k * m.get(j, c);
            m.set(i, c, v);
        }
    }
    m
}

fn plain_morphism(f: &FanMorphism) -> StackyMorphism {
    StackyMorphism::new(
        StackyFan::plain(f.source().clone()),
        StackyFan::plain(f.target().clone()),
        f.map().clone(),
        IntMatrix::zeros(0, 0),
    )
    .unwrap()
}

fn grid(n: usize) -> Vec<Vec<Rat>> {
    let axis: Vec<Rat> = (-4..=4).map(|k| frac(k, 2)).collect();
    let mut pts = vec![vec![]];
    for _ in 0..n {
        pts = pts
            .into_iter()
            .flat_map(|p: Vec<Rat>| axis.iter().map(move |a| [p.clone(), vec![a.clone()]].concat()))
            .collect();
    }
    pts
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn cokernel_is_invariant_under_base_change((a, seed) in (1usize..=3, 1usize..=3).prop_flat_map(|(r, c)| (matrix(r, c), any::<u64>()))) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = unimodular(&mut rng, a.nrows());
        let v = unimodular(&mut rng, a.ncols());
        let b = u.mul(&a).unwrap().mul(&v).unwrap();
        prop_assert_eq!(cokernel_group(&a).group, cokernel_group(&b).group);
    }

    #[test]
    fn saturation_index_is_product_of_invariants(a in (1usize..=3).prop_flat_map(|r| matrix(r, 3))) {
        let gens = a.rows_vec();
        let product = smith_normal_form(&a).invariants().iter().filter(|d| !d.is_zero()).fold(Int::one(), |acc, d| acc * d);
        if gens.iter().any(|g| g.iter().any(|x| !x.is_zero())) {
            prop_assert_eq!(saturation_index(&gens, 3), product);
        }
        let s = saturate(&gens, 3);
        prop_assert_eq!(s.len(), rank_int(&gens, 3));
    }

    #[test]
    fn dual_map_is_contravariant((f, g) in (matrix(2, 3), matrix(3, 2))) {
        let (f, g) = (LatticeMap::new(f), LatticeMap::new(g));
        prop_assert_eq!(f.dual().dual(), f.clone());
        let gf = g.compose(&f).unwrap();
        prop_assert_eq!(gf.dual(), f.dual().compose(&g.dual()).unwrap());
    }

    #[test]
    fn dimension_plus_perp(gens in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 1..=4)) {
        let gens: Vec<Vec<Int>> = gens.iter().map(|v| v.iter().map(|&x| Int::from(x)).collect()).collect();
        if let Ok(c) = ccc_core::cone::cone_from_rays(3, &gens) {
            prop_assert_eq!(c.dim() + c.equations().len(), 3);
            prop_assert_eq!(c.dual().dual(), c);
        }
    }

    #[test]
    fn smooth_refinement_is_smooth(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fan = common::random_fan(&mut rng, 2);
        let out = smooth_refine(&fan).unwrap();
        for c in out.maximal_cones() {
            let rays = IntMatrix::from_rows(c.rays().to_vec(), 2).unwrap();
            prop_assert!(smith_normal_form(&rays).invariants().iter().all(|d| d.is_one()));
        }
        let rel = fan_relate(&out, &fan).unwrap();
        prop_assert!(matches!(rel, FanRelation::Equal | FanRelation::Refines));
    }

    #[test]
    fn properness_matches_cell_samples(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = common::random_fan_morphism(&mut rng);
        let n = f.source().ambient_rank();
        let mut hs = f.source().hyperplanes();
        let dual = f.map().dual();
        for h in f.target().hyperplanes() {
            let normal: Vec<Int> = h.normal.iter().map(|x| x.to_integer()).collect();
            hs.push(Hyperplane::linear(ccc_core::linalg::to_rat(&dual.apply(&normal))));
        }
        let samples = cells(&Region::whole(n), &hs, CellMode::AllFaces).unwrap();
        let brute = samples.iter().all(|c| {
            f.source().support_contains(&c.sample) == f.target().support_contains(&f.map().apply_rat(&c.sample))
        });
        prop_assert_eq!(f.is_proper().unwrap(), brute);
    }

    #[test]
    fn stars_project_bijectively(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fan = common::random_fan(&mut rng, 2);
        for tau in fan.cones() {
            let q = star_quotient(&fan, tau).unwrap();
            prop_assert_eq!(q.star.len(), q.quotient_fan.cones().len());
            for a in &q.star {
                for b in &q.star {
                    let (ia, ib) = (a.image(&q.projection).unwrap(), b.image(&q.projection).unwrap());
                    prop_assert_eq!(a.is_subset_of(b), ia.is_subset_of(&ib));
                }
            }
        }
    }

    #[test]
    fn skeleton_membership_matches_grid(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fan = common::random_fan(&mut rng, 2);
        let skel = fltz_skeleton(&StackyFan::plain(fan.clone()));
        for piece in &skel.pieces {
            let c = piece.cone.as_ref().unwrap();
            prop_assert_eq!(&piece.fiber, &c.negate());
        }
        let pts = grid(2);
        for _ in 0..60 {
            let x = &pts[rng.gen_range(0..pts.len())];
            let v = &pts[rng.gen_range(0..pts.len())];
            let neg: Vec<Rat> = v.iter().map(|a| -a).collect();
            // x ∈ σ⊥ + M iff x pairs integrally with the saturated span of σ.
            let oracle = fan.cones().iter().any(|c| {
                c.contains(&neg)
                    && saturate(c.rays(), 2).iter().all(|u| {
                        u.iter().zip(x).map(|(a, b)| Rat::from_integer(a.clone()) * b).sum::<Rat>().is_integer()
                    })
            });
            let got = skel.contains(&CovectorPoint::new(x.clone(), v.clone())).unwrap();
            prop_assert_eq!(got, oracle, "x = {:?}, v = {:?}", x, v);
        }
    }

    #[test]
    fn skeleton_subset_is_reflexive_and_transitive(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fan = common::random_fan(&mut rng, 2);
        let keep: Vec<Cone> = fan.maximal_cones().into_iter().filter(|_| rng.gen_bool(0.6)).collect();
        let mid = Fan::new(2, keep).unwrap();
        let keep: Vec<Cone> = mid.maximal_cones().into_iter().filter(|_| rng.gen_bool(0.6)).collect();
        let low = Fan::new(2, keep).unwrap();
        let [a, b, c] = [&low, &mid, &fan].map(|f| fltz_skeleton(&StackyFan::plain(f.clone())));
        prop_assert!(skeleton_subset(&c, &c).unwrap());
        prop_assert!(skeleton_subset(&a, &b).unwrap() && skeleton_subset(&b, &c).unwrap());
        prop_assert!(skeleton_subset(&a, &c).unwrap());
        prop_assert!(skeleton_subset(&Skeleton::zero_section(2), &c).unwrap());
    }

    #[test]
    fn right_functoriality_ignores_base_change(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = common::random_fan_morphism(&mut rng);
        let (n, m) = (f.source().ambient_rank(), f.target().ambient_rank());
        let u = unimodular(&mut rng, n);
        let v = unimodular(&mut rng, m);
        let u_inv = smith_normal_form(&u).right.mul(&smith_normal_form(&u).left).unwrap();
        let map = v.mul(f.map().matrix()).unwrap().mul(&u_inv).unwrap();
        let source = f.source().image(&LatticeMap::new(u.clone())).unwrap();
        let target = f.target().image(&LatticeMap::new(v.clone())).unwrap();
        let g = FanMorphism::new(LatticeMap::new(map), source, target).unwrap();
        let a = decide_right_functorial(&plain_morphism(&f)).unwrap().verdict;
        let b = decide_right_functorial(&plain_morphism(&g)).unwrap().verdict;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn convolution_commutes_and_associates(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut f = || {
            let lo: i64 = rng.gen_range(-3..=3);
            let len: i64 = rng.gen_range(0..=3);
            let r = Region::new(1, vec![
                ccc_core::Constraint::new(vec![Rat::one()], Rat::from_integer(lo.into()), if rng.gen_bool(0.5) { ccc_core::polyhedron::Rel::Ge } else { ccc_core::polyhedron::Rel::Gt }),
                ccc_core::Constraint::ge(vec![-Rat::one()], Rat::from_integer((-(lo + len)).into())),
            ]);
            ConFun::indicator(r).scale(&Int::from(rng.gen_range(1..=3)))
        };
        let (a, b, c) = (f(), f(), f());
        prop_assert!(confun_equal(&convolve(&a, &b).unwrap(), &convolve(&b, &a).unwrap()).unwrap());
        let left = convolve(&convolve(&a, &b).unwrap(), &c).unwrap();
        let right = convolve(&a, &convolve(&b, &c).unwrap()).unwrap();
        prop_assert!(confun_equal(&left, &right).unwrap());
    }

    #[test]
    fn pushforward_composition(entries in prop::collection::vec(-2i64..=2, 4), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lo = Rat::from_integer(rng.gen_range(-2i64..=0).into());
        let square = Region::new(2, vec![
            ccc_core::Constraint::ge(vec![Rat::one(), Rat::zero()], lo.clone()),
            ccc_core::Constraint::gt(vec![-Rat::one(), Rat::zero()], Rat::from_integer((-2).into())),
            ccc_core::Constraint::gt(vec![Rat::zero(), Rat::one()], lo),
            ccc_core::Constraint::ge(vec![Rat::one(), Rat::one()], Rat::zero()),
            ccc_core::Constraint::ge(vec![Rat::zero(), -Rat::one()], Rat::from_integer((-1).into())),
        ]);
        let f = ConFun::indicator(square);
        let r = |x: i64| Rat::from_integer(x.into());
        let a = vec![vec![r(entries[0]), r(entries[1])], vec![r(entries[2]), r(entries[3])]];
        let b = vec![vec![r(1), r(-2)]];
        let ba = vec![vec![&a[0][0] - r(2) * &a[1][0], &a[0][1] - r(2) * &a[1][1]]];
        let two = pushforward_affine(&pushforward_affine(&f, &a, &[r(0), r(1)]).unwrap(), &b, &[r(3)]).unwrap();
        let one = pushforward_affine(&f, &ba, &[r(1)]).unwrap();
        prop_assert!(confun_equal(&two, &one).unwrap());
    }
}

#[test]
fn classification_and_conversions_on_fixtures() {
    for x in [fixtures::a2_mod_z2(), fixtures::doubled_line(), StackyFan::plain(fixtures::p1xp1())] {
        let c = x.classify().unwrap();
        assert!(!c.is_variety || c.is_scheme);
        if let Some(p) = &c.presentation {
            assert_eq!(p.fan.ambient_rank(), p.lattice_rank);
        }
        let back = from_gs(&to_gs(&x).unwrap()).unwrap();
        assert_eq!(back.group(), x.group());
        assert_eq!(back.fan(), x.fan());
        let t = x.torus_data();
        let free_rows: Vec<Vec<Int>> = x.beta().matrix().rows_vec().into_iter().take(x.group().free_rank()).collect();
        assert_eq!(t.deck_lattice.len() + rank_int(&free_rows, x.rank()), x.rank());
    }
}

#[test]
fn group_change_factorization_composes() {
    for phi in [fixtures::a2_mod_z2_morphism(), fixtures::doubled_line_to_a1()] {
        let (first, second) = phi.factor_group_change().unwrap();
        assert!(second.compose(&first).unwrap().same_as(&phi));
    }
}

#[test]
fn abc_side_maps_are_proper() {
    let phi = FanMorphism::new(LatticeMap::new(IntMatrix::from_i64_rows(&[&[1, 0]], 2)), fixtures::p1xp1(), fixtures::p1()).unwrap();
    let abc = ccc_core::abc_factorization(&phi).unwrap();
    assert!(abc.a.is_proper().unwrap());
    assert!(abc.c.is_proper().unwrap());
}

#[test]
fn unit_of_completed_plane() {
    let (fan, _) = complete_fan(&fixtures::a2()).unwrap();
    let unit = unit_chi(&StackyFan::plain(fan)).unwrap();
    let deck = vec![vec![Int::one(), Int::zero()], vec![Int::zero(), Int::one()]];
    let square = Region::new(2, vec![
        ccc_core::Constraint::gt(vec![Rat::one(), Rat::zero()], frac(1, 3)),
        ccc_core::Constraint::ge(vec![-Rat::one(), Rat::zero()], frac(-3, 2)),
        ccc_core::Constraint::ge(vec![Rat::one(), -Rat::one()], Rat::zero()),
        ccc_core::Constraint::gt(vec![Rat::zero(), Rat::one()], frac(-1, 2)),
    ]);
    let f = ConFun::indicator(square).periodic(&deck).unwrap();
    assert!(confun_equal(&convolve(&unit, &f).unwrap(), &f).unwrap());
}
