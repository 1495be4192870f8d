//! Small named fans, stacky fans and morphisms used by tests, benches and the CLI.

use crate::fan::Fan;
use crate::lattice::{FinAbGroup, IntMatrix, LatticeMap};
use crate::linalg::{int_vec, rat, rat_vec};
use crate::polyhedron::{Constraint, Region};
use crate::stacky::{StackyFan, StackyMorphism};

pub fn a1() -> Fan {
    Fan::from_i64(1, &[&[&[1]]]).unwrap()
}

pub fn p1() -> Fan {
    Fan::from_i64(1, &[&[&[1]], &[&[-1]]]).unwrap()
}

pub fn a2() -> Fan {
    Fan::from_i64(2, &[&[&[1, 0], &[0, 1]]]).unwrap()
}

/// The cone spanned by `(1,0)` and `(1,2)`.
pub fn a2_git() -> Fan {
    Fan::from_i64(2, &[&[&[1, 0], &[1, 2]]]).unwrap()
}

pub fn punctured_plane() -> Fan {
    Fan::from_i64(2, &[&[&[1, 0]], &[&[0, 1]]]).unwrap()
}

pub fn p1xp1() -> Fan {
    p1().product(&p1())
}

pub fn p2() -> Fan {
    Fan::from_i64(2, &[&[&[1, 0], &[0, 1]], &[&[0, 1], &[-1, -1]], &[&[-1, -1], &[1, 0]]]).unwrap()
}

pub fn blowup_a2() -> Fan {
    Fan::from_i64(2, &[&[&[1, 0], &[1, 1]], &[&[1, 1], &[0, 1]]]).unwrap()
}

/// Two cones meeting along the ray `(1,0)`, with rays `(1,1)` and `(1,-1)`.
pub fn kp1() -> Fan {
    Fan::from_i64(2, &[&[&[1, 1], &[1, 0]], &[&[1, 0], &[1, -1]]]).unwrap()
}

/// `𝔸²` with `ℤ/2` acting by `-1` on both coordinates.
pub fn a2_mod_z2() -> StackyFan {
    StackyFan::new(a2(), FinAbGroup::new(0, int_vec(&[2])).unwrap(), IntMatrix::from_i64_rows(&[&[-1, 1]], 2))
        .unwrap()
}

/// The coarse space map of [`a2_mod_z2`].
pub fn a2_mod_z2_morphism() -> StackyMorphism {
    let phi_n = LatticeMap::from_images(&[int_vec(&[1, 0]), int_vec(&[1, 2])], 2).unwrap();
    StackyMorphism::new(a2_mod_z2(), StackyFan::plain(a2_git()), phi_n, IntMatrix::zeros(1, 0)).unwrap()
}

/// The punctured plane divided by the antidiagonal `𝔾ₘ`: the line with a doubled origin.
pub fn doubled_line() -> StackyFan {
    StackyFan::new(punctured_plane(), FinAbGroup::free(1), IntMatrix::from_i64_rows(&[&[1, -1]], 2)).unwrap()
}

pub fn doubled_line_to_a1() -> StackyMorphism {
    let phi_n = LatticeMap::new(IntMatrix::from_i64_rows(&[&[1, 1]], 2));
    StackyMorphism::new(doubled_line(), StackyFan::plain(a1()), phi_n, IntMatrix::zeros(1, 0)).unwrap()
}

/// The three open half-planes `x > 1`, `y > x`, `x + y > 0`.
pub fn half_planes() -> [Region; 3] {
    [
        Region::new(2, vec![Constraint::gt(rat_vec(&[1, 0]), rat(1))]),
        Region::new(2, vec![Constraint::gt(rat_vec(&[-1, 1]), rat(0))]),
        Region::new(2, vec![Constraint::gt(rat_vec(&[1, 1]), rat(0))]),
    ]
}
