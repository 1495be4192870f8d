//! Stacky fans `(N, Σ, L, β)` and their morphisms.

use std::collections::BTreeSet;

use num_traits::Signed;

use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::fan::{smooth_refine, Fan, FanMorphism};
use crate::lattice::{self, cokernel_group, FinAbGroup, GroupHom, IntMatrix, LatticeMap};
use crate::linalg::Int;

/// A fan on `N` with `β : M = N^∨ → L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StackyFan {
    fan: Fan,
    beta: GroupHom,
}

impl StackyFan {
    /// `beta` has one row per generator of `group` and one column per
    /// coordinate of `M`; torsion rows are reduced.
    pub fn new(fan: Fan, group: FinAbGroup, beta: IntMatrix) -> Result<StackyFan> {
        let n = fan.ambient_rank();
        if beta.ncols() != n || beta.nrows() != group.num_generators() {
            return Err(Error::IncompatibleBeta(format!(
                "β must be a {}x{n} matrix for M = ℤ^{n} → {group}, got {}x{}",
                group.num_generators(),
                beta.nrows(),
                beta.ncols()
            )));
        }
        let beta = GroupHom::new(FinAbGroup::free(n), group, beta)
            .map_err(|e| Error::IncompatibleBeta(e.to_string()))?;
        Ok(StackyFan { fan, beta })
    }

    /// A toric variety: `L = 0`.
    pub fn plain(fan: Fan) -> StackyFan {
        let n = fan.ambient_rank();
        StackyFan::new(fan, FinAbGroup::trivial(), IntMatrix::zeros(0, n)).expect("zero map")
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn rank(&self) -> usize {
        self.fan.ambient_rank()
    }

    pub fn group(&self) -> &FinAbGroup {
        self.beta.target()
    }

    pub fn beta(&self) -> &GroupHom {
        &self.beta
    }

    pub fn torus_data(&self) -> TorusCoverData {
        let n = self.rank();
        let component_group = self.beta.cokernel().group;
        let deck_lattice = lattice::lattice_basis(&self.beta.kernel_generators(), n);
        let compact_rank = deck_lattice.len();
        let deck_index = (compact_rank == n)
            .then(|| IntMatrix::from_columns(&deck_lattice, n).expect("square").det().abs());
        TorusCoverData { component_group, deck_lattice, compact_rank, vector_rank: n - compact_rank, deck_index }
    }

    /// Scheme and variety tests, with the presenting fan when it is a variety.
    pub fn classify(&self) -> Result<Classification> {
        let l = self.group();
        for sigma in self.fan.maximal_cones() {
            let perp = sigma.equations();
            let cols: Vec<Vec<Int>> = perp.iter().map(|e| self.beta.matrix().apply(e)).collect();
            let m = IntMatrix::from_columns(&cols, l.num_generators())?;
            let restricted = GroupHom::new(FinAbGroup::free(perp.len()), l.clone(), m)?;
            if !restricted.is_surjective() {
                return Ok(Classification { is_scheme: false, is_variety: false, presentation: None, failing_cone: Some(sigma) });
            }
        }
        // K = torsion-free part of coker(L^∨ → N); L^∨ only sees the free rows of β.
        let free_rows: Vec<usize> = (0..l.free_rank()).collect();
        let beta_dual = self.beta.matrix().select_rows(&free_rows).transpose();
        let coker = cokernel_group(&beta_dual);
        let phi = LatticeMap::new(coker.torsion_free_projection());
        let k = phi.target_rank();

        let cones = self.fan.cones();
        let images: Vec<Cone> = cones.iter().map(|c| c.image(&phi)).collect::<Result<Vec<_>>>()?;
        let mut is_variety = images.iter().all(Cone::is_strongly_convex)
            && images.iter().collect::<BTreeSet<_>>().len() == images.len();
        if is_variety {
            'order: for (i, a) in cones.iter().enumerate() {
                for (j, b) in cones.iter().enumerate() {
                    if a.is_face_of(b) != images[i].is_face_of(&images[j]) {
                        is_variety = false;
                        break 'order;
                    }
                }
            }
        }
        let presentation = if is_variety {
            match Fan::new(k, images) {
                Ok(f) => Some(Presentation { lattice_rank: k, fan: f, map: phi }),
                Err(_) => {
                    is_variety = false;
                    None
                }
            }
        } else {
            None
        };
        Ok(Classification { is_scheme: true, is_variety, presentation, failing_cone: None })
    }
}

#[derive(Clone, Debug)]
pub struct Presentation {
    pub lattice_rank: usize,
    pub fan: Fan,
    /// `Φ : N → K`.
    pub map: LatticeMap,
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub is_scheme: bool,
    pub is_variety: bool,
    pub presentation: Option<Presentation>,
    /// A maximal cone where the scheme condition fails.
    pub failing_cone: Option<Cone>,
}

/// Bookkeeping for the cover `(M_ℝ × L)/M` of `M_ℝ/M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusCoverData {
    pub component_group: FinAbGroup,
    /// A basis of `ker β ⊆ M`.
    pub deck_lattice: Vec<Vec<Int>>,
    pub compact_rank: usize,
    pub vector_rank: usize,
    /// `[M : ker β]` when `ker β` has full rank.
    pub deck_index: Option<Int>,
}

/// A fan morphism `φ_N` with a compatible `φ_L : L′ → L`.
#[derive(Clone, Debug)]
pub struct StackyMorphism {
    source: StackyFan,
    target: StackyFan,
    fan_morphism: FanMorphism,
    group_map: GroupHom,
}

impl StackyMorphism {
    pub fn new(source: StackyFan, target: StackyFan, phi_n: LatticeMap, phi_l: IntMatrix) -> Result<StackyMorphism> {
        let fan_morphism = FanMorphism::new(phi_n, source.fan.clone(), target.fan.clone())?;
        let group_map = GroupHom::new(target.group().clone(), source.group().clone(), phi_l)?;
        let lhs = source.beta.matrix().mul(fan_morphism.map().dual().matrix())?;
        let rhs = group_map.matrix().mul(target.beta.matrix())?;
        let l = source.group();
        let same = lhs
            .columns()
            .iter()
            .zip(rhs.columns())
            .all(|(a, b)| l.reduce(a) == l.reduce(&b));
        if !same {
            return Err(Error::IncompatibleBeta("β ∘ φ_M differs from φ_L ∘ β′".into()));
        }
        Ok(StackyMorphism { source, target, fan_morphism, group_map })
    }

    pub fn identity(x: &StackyFan) -> StackyMorphism {
        StackyMorphism {
            source: x.clone(),
            target: x.clone(),
            fan_morphism: FanMorphism::identity(&x.fan),
            group_map: GroupHom::identity(x.group()),
        }
    }

    pub fn source(&self) -> &StackyFan {
        &self.source
    }

    pub fn target(&self) -> &StackyFan {
        &self.target
    }

    pub fn fan_morphism(&self) -> &FanMorphism {
        &self.fan_morphism
    }

    pub fn phi_n(&self) -> &LatticeMap {
        self.fan_morphism.map()
    }

    /// `φ_M : M′ → M`.
    pub fn phi_m(&self) -> LatticeMap {
        self.fan_morphism.map().dual()
    }

    pub fn group_map(&self) -> &GroupHom {
        &self.group_map
    }

    /// `self ∘ inner`; group maps compose the other way round.
    pub fn compose(&self, inner: &StackyMorphism) -> Result<StackyMorphism> {
        let group = inner.group_map.compose(&self.group_map)?;
        StackyMorphism::new(
            inner.source.clone(),
            self.target.clone(),
            self.phi_n().compose(inner.phi_n())?,
            group.matrix().clone(),
        )
    }

    /// Exact equality of fan and group data.
    pub fn same_as(&self, other: &StackyMorphism) -> bool {
        self.source == other.source
            && self.target == other.target
            && self.phi_n() == other.phi_n()
            && self.group_map == other.group_map
    }

    /// Splits into a change of fan over a fixed group followed by a pure
    /// change of group.
    pub fn factor_group_change(&self) -> Result<(StackyMorphism, StackyMorphism)> {
        let beta_mid = self.source.beta.matrix().mul(self.phi_m().matrix())?;
        let mid = StackyFan::new(self.target.fan.clone(), self.source.group().clone(), beta_mid)?;
        let first = StackyMorphism::new(
            self.source.clone(),
            mid.clone(),
            self.phi_n().clone(),
            IntMatrix::identity(self.source.group().num_generators()),
        )?;
        let second = StackyMorphism::new(
            mid,
            self.target.clone(),
            LatticeMap::identity(self.target.rank()),
            self.group_map.matrix().clone(),
        )?;
        Ok((first, second))
    }
}

/// The two directions of the dictionary with `(L, Σ, N, φ)`-style data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GsQuadruple {
    /// The lattice carrying the fan.
    pub fan: Fan,
    /// Rank of the target lattice of `φ`.
    pub target_rank: usize,
    /// `φ`, with finite cokernel.
    pub phi: LatticeMap,
}

/// From a surjective `β`: the target lattice is `(ker β)^∨` and `φ` is the
/// dual of `ker β ↪ M`.
pub fn to_gs(x: &StackyFan) -> Result<GsQuadruple> {
    if !x.beta.is_surjective() {
        return Err(Error::NotConvertible("β is not surjective".into()));
    }
    let n = x.rank();
    let ker = lattice::lattice_basis(&x.beta.kernel_generators(), n);
    let inclusion = LatticeMap::from_images(&ker, n)?;
    let phi = inclusion.dual();
    Ok(GsQuadruple { fan: x.fan.clone(), target_rank: phi.target_rank(), phi })
}

/// From `φ` with finite cokernel: `L = coker(φ^∨)` and `β` the projection.
pub fn from_gs(q: &GsQuadruple) -> Result<StackyFan> {
    let r = lattice::smith_normal_form(q.phi.matrix()).rank;
    if r != q.target_rank {
        return Err(Error::NotConvertible("coker φ is not finite".into()));
    }
    let coker = cokernel_group(q.phi.dual().matrix());
    StackyFan::new(q.fan.clone(), coker.group, coker.projection)
}

/// The three maps `a`, `b`, `c` with `c·b·a = φ_N`, and a smooth fan `Σ_s`
/// refining `Σ × Σ′` that contains `b(σ × 0)` for every `σ ∈ Σ`.
#[derive(Clone, Debug)]
pub struct AbcFactorization {
    pub a: FanMorphism,
    pub b: FanMorphism,
    pub c: FanMorphism,
    pub smooth_fan: Fan,
}

fn block(rows: &[&[&IntMatrix]]) -> IntMatrix {
    let mut out: Option<IntMatrix> = None;
    for row in rows {
        let mut r = row[0].clone();
        for m in &row[1..] {
            r = r.hstack(m).expect("block rows agree");
        }
        out = Some(match out {
            None => r,
            Some(o) => o.vstack(&r).expect("block columns agree"),
        });
    }
    out.expect("at least one block row")
}

pub fn abc_factorization(phi: &FanMorphism) -> Result<AbcFactorization> {
    let sigma = phi.source();
    let sigma_t = phi.target();
    if !sigma.is_smooth() || !sigma.is_complete()? {
        return Err(Error::SourceNotSmoothComplete);
    }
    let n = sigma.ambient_rank();
    let m = sigma_t.ambient_rank();
    let f = phi.map().matrix();
    let (i_n, i_m) = (IntMatrix::identity(n), IntMatrix::identity(m));
    let a = block(&[&[&i_n], &[&IntMatrix::zeros(m, n)]]);
    let b = block(&[&[&i_n, &IntMatrix::zeros(n, m)], &[f, &i_m]]);
    let c = block(&[&[&IntMatrix::zeros(m, n), &i_m]]);
    let (a, b, c) = (LatticeMap::new(a), LatticeMap::new(b), LatticeMap::new(c));

    let sigma_0 = sigma.product(&Fan::zero(m));
    let product = sigma.product(sigma_t);
    let fa = FanMorphism::new(a, sigma.clone(), sigma_0.clone())?;
    let fb = FanMorphism::new(b.clone(), sigma_0.clone(), product.clone())?;
    let fc = FanMorphism::new(c, product.clone(), sigma_t.clone())?;

    // b is unimodular, so b(Σ × orthants) is a complete fan containing every b(σ × 0).
    let graph = sigma.product(&Fan::orthants(m)).image(&b)?;
    let smooth_fan = smooth_refine(&product.common_refinement(&graph)?)?;
    for c in sigma_0.cones() {
        let img = c.image(&b)?;
        if !smooth_fan.contains_cone(&img) {
            return Err(Error::InternalInconsistency(format!("graph cone {img} did not survive refinement")));
        }
    }
    Ok(AbcFactorization { a: fa, b: fb, c: fc, smooth_fan })
}

impl AbcFactorization {
    /// `c · b · a` as a matrix.
    pub fn product_matrix(&self) -> IntMatrix {
        let ba = self.b.map().compose(self.a.map()).expect("ranks agree");
        self.c.map().compose(&ba).expect("ranks agree").matrix().clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_vec;

    fn a2() -> Fan {
        Fan::from_i64(2, &[&[&[1, 0], &[0, 1]]]).unwrap()
    }

    fn z2() -> FinAbGroup {
        FinAbGroup::new(0, int_vec(&[2])).unwrap()
    }

    #[test]
    fn a2_mod_z2_torus() {
        let x = StackyFan::new(a2(), z2(), IntMatrix::from_i64_rows(&[&[-1, 1]], 2)).unwrap();
        let t = x.torus_data();
        assert!(t.component_group.is_trivial());
        assert_eq!(t.compact_rank, 2);
        assert_eq!(t.deck_index, Some(Int::from(2)));
    }

    #[test]
    fn doubled_line_classification() {
        let f = Fan::from_i64(2, &[&[&[1, 0]], &[&[0, 1]]]).unwrap();
        let x = StackyFan::new(f, FinAbGroup::free(1), IntMatrix::from_i64_rows(&[&[1, -1]], 2)).unwrap();
        let c = x.classify().unwrap();
        assert!(c.is_scheme);
        assert!(!c.is_variety);
        let t = x.torus_data();
        assert_eq!((t.compact_rank, t.vector_rank), (1, 1));
    }

    #[test]
    fn line_with_z2_is_not_a_scheme() {
        let a1 = Fan::from_i64(1, &[&[&[1]]]).unwrap();
        let x = StackyFan::new(a1, z2(), IntMatrix::from_i64_rows(&[&[1]], 1)).unwrap();
        assert!(!x.classify().unwrap().is_scheme);
        let pt = StackyFan::new(Fan::zero(1), z2(), IntMatrix::from_i64_rows(&[&[1]], 1)).unwrap();
        let c = pt.classify().unwrap();
        assert!(c.is_scheme && c.is_variety);
        assert_eq!(c.presentation.unwrap().lattice_rank, 1);
    }

    #[test]
    fn gs_round_trip() {
        let x = StackyFan::new(a2(), z2(), IntMatrix::from_i64_rows(&[&[-1, 1]], 2)).unwrap();
        let q = to_gs(&x).unwrap();
        assert_eq!(cokernel_group(q.phi.matrix()).group, z2());
        let back = from_gs(&q).unwrap();
        assert_eq!(back.group(), &z2());
        let id = GsQuadruple { fan: a2(), target_rank: 2, phi: LatticeMap::identity(2) };
        assert!(from_gs(&id).unwrap().group().is_trivial());
    }

    #[test]
    fn abc_for_doubling_on_p1() {
        let p1 = Fan::from_i64(1, &[&[&[1]], &[&[-1]]]).unwrap();
        let phi = FanMorphism::new(LatticeMap::new(IntMatrix::from_i64_rows(&[&[2]], 1)), p1.clone(), p1).unwrap();
        let abc = abc_factorization(&phi).unwrap();
        assert_eq!(abc.product_matrix(), IntMatrix::from_i64_rows(&[&[2]], 1));
        assert!(abc.smooth_fan.is_smooth());
    }
}
