pub mod error;
pub mod lattice;
pub mod linalg;
pub mod polyhedron;
pub mod arrangement;
pub mod cone;
pub mod fan;
pub mod stacky;
pub mod skeleton;
pub mod euler;
pub mod fixtures;

pub use error::{Error, Result};
pub use euler::{confun_equal, convolve, pushforward_affine, pushforward_covering, unit_chi, ConFun, SheafSymbol};
pub use fan::{complete_fan, fan_relate, smooth_refine, star_quotient, Fan, FanMorphism, FanRelation};
pub use cone::Cone;
pub use lattice::{smith_normal_form, FinAbGroup, GroupHom, IntMatrix, LatticeMap};
pub use linalg::{Int, Rat};
pub use polyhedron::{Constraint, Region};
pub use skeleton::{
    decide_left_functorial, decide_right_functorial, fltz_skeleton, pushforward_skeleton, skeleton_subset,
    CovectorPoint, Skeleton,
};
pub use stacky::{abc_factorization, StackyFan, StackyMorphism};
