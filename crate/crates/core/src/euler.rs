//! Integer-valued constructible functions on `ℚⁿ` and on its quotients by
//! lattices, with Euler integration along linear maps.

use std::fmt;

use num_traits::{One, Zero};

use crate::arrangement::{self, CellMode, Hyperplane};
use crate::error::{Error, Result};
use crate::lattice;
use crate::linalg::{self, Int, Rat};
use crate::polyhedron::{sign_of_dim, Constraint, Region};
use crate::stacky::StackyFan;

/// `Σ c_i · 1_{R_i}`, optionally summed over all translates by a deck lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConFun {
    ambient: usize,
    terms: Vec<(Int, Region)>,
    /// Hermite basis of the deck lattice.
    deck: Option<Vec<Vec<Int>>>,
}

impl ConFun {
    pub fn zero(ambient: usize) -> Self {
        ConFun { ambient, terms: Vec::new(), deck: None }
    }

    pub fn indicator(region: Region) -> Self {
        ConFun { ambient: region.dim(), terms: vec![(Int::one(), region)], deck: None }
    }

    pub fn from_terms(ambient: usize, terms: Vec<(Int, Region)>) -> Result<Self> {
        if let Some((_, r)) = terms.iter().find(|(_, r)| r.dim() != ambient) {
            return Err(Error::DimensionMismatch(format!("region in ℚ^{} for a function on ℚ^{ambient}", r.dim())));
        }
        Ok(ConFun { ambient, terms, deck: None })
    }

    pub fn delta(point: &[Rat]) -> Self {
        Self::indicator(Region::point(point))
    }

    /// Reads the function as the sum of its translates by `deck`.
    pub fn periodic(mut self, deck: &[Vec<Int>]) -> Result<Self> {
        if deck.iter().any(|v| v.len() != self.ambient) {
            return Err(Error::DimensionMismatch("deck vectors have the wrong length".into()));
        }
        self.deck = Some(lattice::lattice_basis(deck, self.ambient));
        Ok(self)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn terms(&self) -> &[(Int, Region)] {
        &self.terms
    }

    pub fn deck(&self) -> Option<&[Vec<Int>]> {
        self.deck.as_deref()
    }

    fn same_space(&self, other: &ConFun) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!(
                "functions on ℚ^{} and ℚ^{}",
                self.ambient, other.ambient
            )));
        }
        if self.deck != other.deck {
            return Err(Error::DimensionMismatch("functions live on different quotients".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &ConFun) -> Result<ConFun> {
        self.same_space(other)?;
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        Ok(out)
    }

    pub fn scale(&self, c: &Int) -> ConFun {
        let mut out = self.clone();
        for (k, _) in out.terms.iter_mut() {
            *k = &*k * c;
        }
        out.terms.retain(|(k, _)| !k.is_zero());
        out
    }

    pub fn neg(&self) -> ConFun {
        self.scale(&-Int::one())
    }

    pub fn sub(&self, other: &ConFun) -> Result<ConFun> {
        self.add(&other.neg())
    }

    fn eval_terms(&self, x: &[Rat]) -> Int {
        self.terms
            .iter()
            .filter(|(_, r)| r.contains(x))
            .fold(Int::zero(), |acc, (c, _)| acc + c)
    }

    /// The value at `x` (for periodic functions, at the class of `x`).
    pub fn eval(&self, x: &[Rat]) -> Result<Int> {
        if x.len() != self.ambient {
            return Err(Error::DimensionMismatch("evaluation point has the wrong length".into()));
        }
        match &self.deck {
            None => Ok(self.eval_terms(x)),
            Some(deck) => {
                let fd = FundamentalDomain::new(deck, self.ambient);
                Ok(self.fold()?.eval_terms(&fd.reduce(x)))
            }
        }
    }

    /// Rewrites as a sum over disjoint relatively open cells with nonzero
    /// values. Periodic functions are first folded into the fundamental domain.
    pub fn normalize(&self) -> Result<ConFun> {
        if self.deck.is_some() {
            let mut folded = self.fold()?;
            folded.deck = None;
            let mut n = folded.normalize()?;
            n.deck = self.deck.clone();
            return Ok(n);
        }
        let mut hs = Vec::new();
        for (_, r) in &self.terms {
            for c in r.constraints() {
                hs.push(Hyperplane::new(c.normal.clone(), c.rhs.clone()));
            }
        }
        let cells = arrangement::cells(&Region::whole(self.ambient), &hs, CellMode::AllFaces)?;
        let mut terms = Vec::new();
        for cell in cells {
            let v = self.eval_terms(&cell.sample);
            if !v.is_zero() {
                terms.push((v, cell.region.simplified()));
            }
        }
        Ok(ConFun { ambient: self.ambient, terms, deck: None })
    }

    pub fn is_zero(&self) -> Result<bool> {
        Ok(self.normalize()?.terms.is_empty())
    }

    /// A non-periodic function supported in the fundamental domain whose
    /// translates sum to this one. Non-periodic functions are returned as is.
    pub fn fold(&self) -> Result<ConFun> {
        let Some(deck) = &self.deck else {
            return Ok(self.clone());
        };
        let fd = FundamentalDomain::new(deck, self.ambient);
        let mut terms = Vec::new();
        for (c, r) in &self.terms {
            if r.is_empty() {
                continue;
            }
            let mut ranges = Vec::with_capacity(deck.len());
            for row in &fd.coords[..deck.len()] {
                let Some((Some((lo, _)), Some((hi, _)))) = r.bounds(row) else {
                    return Err(Error::Unsupported(
                        "periodic term unbounded along the deck lattice".into(),
                    ));
                };
                let from = linalg::floor(&-hi);
                let to = linalg::floor(&(Rat::one() - lo)) + Int::one();
                ranges.push((from, to));
            }
            let mut g: Vec<Int> = ranges.iter().map(|(a, _)| a.clone()).collect();
            'odometer: loop {
                let shift = fd.translation(&g);
                let piece = r.translate(&shift).intersect(&fd.region);
                if !piece.is_empty() {
                    terms.push((c.clone(), piece));
                }
                for i in 0..g.len() {
                    g[i] += 1;
                    if g[i] <= ranges[i].1 {
                        continue 'odometer;
                    }
                    g[i] = ranges[i].0.clone();
                }
                break;
            }
        }
        Ok(ConFun { ambient: self.ambient, terms, deck: None })
    }
}

impl fmt::Display for ConFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (i, (c, r)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}·1[{r}]")?;
        }
        if let Some(d) = &self.deck {
            let vs: Vec<String> = d.iter().map(|v| crate::cone::fmt_vec(v)).collect();
            write!(f, " mod ⟨{}⟩", vs.join(","))?;
        }
        Ok(())
    }
}

/// `{x : 0 ≤ u_i(x) < 1}` where `u = T⁻¹x` and `T = [deck | complement]`.
struct FundamentalDomain {
    deck: Vec<Vec<Rat>>,
    /// Rows of `T⁻¹`.
    coords: Vec<Vec<Rat>>,
    region: Region,
}

impl FundamentalDomain {
    fn new(deck: &[Vec<Int>], n: usize) -> Self {
        let k = deck.len();
        let deck_rat: Vec<Vec<Rat>> = deck.iter().map(|v| linalg::to_rat(v)).collect();
        let mut columns = deck_rat.clone();
        columns.extend(linalg::nullspace(&deck_rat, n));
        let t: Vec<Vec<Rat>> = (0..n).map(|i| columns.iter().map(|c| c[i].clone()).collect()).collect();
        let coords = linalg::inverse(&t).expect("deck and its complement span");
        let mut cs = Vec::with_capacity(2 * k);
        for row in &coords[..k] {
            cs.push(Constraint::ge(row.clone(), Rat::zero()));
            cs.push(Constraint::gt(row.iter().map(|x| -x).collect(), -Rat::one()));
        }
        FundamentalDomain { deck: deck_rat, coords, region: Region::new(n, cs) }
    }

    fn translation(&self, g: &[Int]) -> Vec<Rat> {
        let n = self.coords.len();
        let mut v = vec![Rat::zero(); n];
        for (gi, b) in g.iter().zip(&self.deck) {
            for (vj, bj) in v.iter_mut().zip(b) {
                *vj += bj * Rat::from_integer(gi.clone());
            }
        }
        v
    }

    fn reduce(&self, x: &[Rat]) -> Vec<Rat> {
        let g: Vec<Int> = self.coords[..self.deck.len()]
            .iter()
            .map(|row| -linalg::floor(&linalg::dot(row, x)))
            .collect();
        let t = self.translation(&g);
        x.iter().zip(&t).map(|(a, b)| a + b).collect()
    }
}

pub fn confun_equal(f: &ConFun, g: &ConFun) -> Result<bool> {
    f.sub(g)?.is_zero()
}

/// Euler integration along `x ↦ a·x + b` (`a` has one row per target
/// coordinate).
pub fn pushforward_affine(f: &ConFun, a: &[Vec<Rat>], b: &[Rat]) -> Result<ConFun> {
    if f.deck.is_some() {
        return Err(Error::Unsupported("affine pushforward of a periodic function".into()));
    }
    let n = f.ambient;
    let m = a.len();
    if b.len() != m || a.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("affine map does not match the function".into()));
    }
    let ker: Vec<Vec<Rat>> = linalg::nullspace(a, n);
    let mut terms = Vec::new();
    for (c, cell) in f.normalize()?.terms {
        // Fibers must be bounded: no recession direction inside ker a.
        if !ker.is_empty() {
            let mut rec = cell.recession();
            let ker_perp = linalg::nullspace(&ker, n);
            for row in ker_perp {
                rec = rec.with(Constraint::eq(row, Rat::zero()));
            }
            if rec.affine_dim() != Some(0) {
                return Err(Error::NotFiberFinite(format!("support {cell} is unbounded along the fibers")));
            }
        }
        // Graph in (y, x): y − a·x = b.
        let mut lifted = cell.embed(m + n, m);
        for (i, row) in a.iter().enumerate() {
            let mut normal = vec![Rat::zero(); m + n];
            normal[i] = Rat::one();
            for (j, x) in row.iter().enumerate() {
                normal[m + j] = -x.clone();
            }
            lifted = lifted.with(Constraint::eq(normal, b[i].clone()));
        }
        let image = lifted.project_prefix(m);
        let fiber_dim = cell.open_cell_dim() - image.open_cell_dim();
        terms.push((c * sign_of_dim(fiber_dim), image));
    }
    ConFun::from_terms(m, terms)?.normalize()
}

/// Pushforward along `ℚⁿ → ℚⁿ/deck`.
pub fn pushforward_covering(f: &ConFun, deck: &[Vec<Int>]) -> Result<ConFun> {
    if f.deck.is_some() {
        return Err(Error::Unsupported("covering pushforward of a periodic function".into()));
    }
    let n = f.ambient;
    let normalized = f.normalize()?;
    let span: Vec<Vec<Rat>> = deck.iter().map(|v| linalg::to_rat(v)).collect();
    let perp = linalg::nullspace(&span, n);
    for (_, cell) in &normalized.terms {
        let mut rec = cell.recession();
        for row in &perp {
            rec = rec.with(Constraint::eq(row.clone(), Rat::zero()));
        }
        if rec.affine_dim() != Some(0) {
            return Err(Error::NotFiberFinite(format!(
                "support {cell} meets infinitely many translates"
            )));
        }
    }
    normalized.periodic(deck)
}

fn deck_of(f: &ConFun) -> Option<&Vec<Vec<Int>>> {
    f.deck.as_ref()
}

/// `m_!(f ⊠ g)` along addition.
pub fn convolve(f: &ConFun, g: &ConFun) -> Result<ConFun> {
    if f.ambient != g.ambient {
        return Err(Error::DimensionMismatch("convolving functions on different spaces".into()));
    }
    let deck = match (deck_of(f), deck_of(g)) {
        (None, None) => None,
        (Some(a), Some(b)) if a == b => Some(a.clone()),
        (Some(a), None) | (None, Some(a)) => Some(a.clone()),
        _ => return Err(Error::DimensionMismatch("functions live on different quotients".into())),
    };
    let lift = |h: &ConFun| -> Result<ConFun> {
        match (&deck, &h.deck) {
            (Some(_), Some(_)) => h.fold(),
            _ => Ok(h.clone()),
        }
    };
    let (ff, gg) = (lift(f)?, lift(g)?);
    let n = f.ambient;
    let nf = ff.normalize()?;
    let ng = gg.normalize()?;
    let mut terms = Vec::new();
    for (cf, rf) in &nf.terms {
        for (cg, rg) in &ng.terms {
            // (z, x) with x ∈ rf and z − x ∈ rg.
            let rec_f = rf.recession();
            let rec_g = rg.recession();
            let opposite = rec_f.intersect(&rec_g.pullback(&negated_identity(n), &vec![Rat::zero(); n], n));
            if opposite.affine_dim() != Some(0) {
                return Err(Error::NotFiberFinite(format!("{rf} and {rg} recede in opposite directions")));
            }
            let x_part = rf.embed(2 * n, n);
            let mut t = vec![vec![Rat::zero(); 2 * n]; n];
            for i in 0..n {
                t[i][i] = Rat::one();
                t[i][n + i] = -Rat::one();
            }
            let z_minus_x = rg.pullback(&t, &vec![Rat::zero(); n], 2 * n);
            let joint = x_part.intersect(&z_minus_x);
            if joint.is_empty() {
                continue;
            }
            let image = joint.project_prefix(n);
            let fiber_dim = rf.open_cell_dim() + rg.open_cell_dim() - image.open_cell_dim();
            terms.push((cf * cg * sign_of_dim(fiber_dim), image));
        }
    }
    let out = ConFun::from_terms(n, terms)?.normalize()?;
    match deck {
        None => Ok(out),
        Some(d) => out.periodic(&d),
    }
}

fn negated_identity(n: usize) -> Vec<Vec<Rat>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { -Rat::one() } else { Rat::zero() }).collect())
        .collect()
}

/// A sheaf recorded only through its Euler characteristic.
#[derive(Clone, Debug)]
pub enum SheafSymbol {
    /// The dualizing sheaf of a locally closed region.
    Costandard(Region),
    /// The constant sheaf on a region, shifted.
    Standard { region: Region, shift: i64 },
}

pub fn region_chi(s: &SheafSymbol) -> ConFun {
    match s {
        SheafSymbol::Standard { region, shift } => {
            ConFun::indicator(region.clone()).scale(&sign_of_dim(shift.unsigned_abs() as usize))
        }
        SheafSymbol::Costandard(region) => match region.affine_dim() {
            None => ConFun::zero(region.dim()),
            Some(d) => ConFun::indicator(region.clone()).scale(&sign_of_dim(d)),
        },
    }
}

/// `χ(cofib[a → b]) = χ(b) − χ(a)`.
pub fn cofib(a: &ConFun, b: &ConFun) -> Result<ConFun> {
    b.sub(a)
}

/// `χ(fib[a → b]) = χ(a) − χ(b)`.
pub fn fib(a: &ConFun, b: &ConFun) -> Result<ConFun> {
    a.sub(b)
}

pub fn shift(f: &ConFun, s: i64) -> ConFun {
    f.scale(&sign_of_dim(s.unsigned_abs() as usize))
}

/// The alternating nerve sum over chains of cones, before pushing to the torus.
pub fn unit_chi_pre(x: &StackyFan) -> Result<ConFun> {
    let n = x.rank();
    let cones = x.fan().cones();
    // weight(τ) = Σ over chains σ₀ ⊋ … ⊋ σ_k = τ of (−1)^k.
    let mut weight: Vec<Int> = vec![Int::zero(); cones.len()];
    for i in (0..cones.len()).rev() {
        let mut w = Int::one();
        for j in i + 1..cones.len() {
            if cones[j].dim() > cones[i].dim() && cones[i].is_face_of(&cones[j]) {
                w -= &weight[j];
            }
        }
        weight[i] = w;
    }
    let mut terms = Vec::new();
    for (c, w) in cones.iter().zip(&weight) {
        if w.is_zero() {
            continue;
        }
        let interior = c.dual().relint_region();
        terms.push((w * sign_of_dim(n), interior));
    }
    ConFun::from_terms(n, terms)?.normalize()
}

/// Euler characteristic of the unit object, on `M_ℝ / ker β`.
pub fn unit_chi(x: &StackyFan) -> Result<ConFun> {
    let pre = unit_chi_pre(x)?;
    pushforward_covering(&pre, &x.torus_data().deck_lattice)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::Fan;
    use crate::linalg::{frac, int_vec, rat, rat_vec};

    fn interval(lo: i64, hi: i64) -> Region {
        Region::new(1, vec![Constraint::ge(rat_vec(&[1]), rat(lo)), Constraint::gt(rat_vec(&[-1]), rat(-hi))])
    }

    #[test]
    fn half_open_intervals_glue() {
        let a = ConFun::indicator(interval(0, 1)).add(&ConFun::indicator(interval(1, 2))).unwrap();
        assert!(confun_equal(&a, &ConFun::indicator(interval(0, 2))).unwrap());
        assert!(!confun_equal(&ConFun::delta(&rat_vec(&[0])), &ConFun::zero(1)).unwrap());
    }

    #[test]
    fn covering_examples() {
        let z = [int_vec(&[1])];
        let d = pushforward_covering(&ConFun::delta(&rat_vec(&[0])), &z).unwrap();
        assert_eq!(d.eval(&rat_vec(&[3])).unwrap(), Int::one());
        assert_eq!(d.eval(&[frac(1, 2)]).unwrap(), Int::zero());

        let ray = Region::new(1, vec![Constraint::gt(rat_vec(&[1]), rat(0))]);
        let err = pushforward_covering(&ConFun::indicator(ray), &z).unwrap_err();
        assert!(matches!(err, Error::NotFiberFinite(_)));

        let circle = pushforward_covering(&ConFun::indicator(interval(0, 1)), &z).unwrap();
        let one = ConFun::indicator(Region::whole(1)).periodic(&z).unwrap();
        // Periodic "whole line" is unbounded along the deck, so compare via values.
        assert!(one.fold().is_err());
        for x in [frac(-7, 3), frac(0, 1), frac(1, 2), frac(5, 4)] {
            assert_eq!(circle.eval(&[x]).unwrap(), Int::one());
        }
    }

    #[test]
    fn projection_of_a_triangle() {
        // Closed triangle projected to the x-axis: every fiber is a point or
        // a closed segment, so the result is the closed interval.
        let tri = Region::new(
            2,
            vec![
                Constraint::ge(rat_vec(&[1, 0]), rat(0)),
                Constraint::ge(rat_vec(&[0, 1]), rat(0)),
                Constraint::ge(rat_vec(&[-1, -1]), rat(-1)),
            ],
        );
        let p = pushforward_affine(&ConFun::indicator(tri), &[rat_vec(&[1, 0])], &rat_vec(&[0])).unwrap();
        let closed = Region::new(1, vec![Constraint::ge(rat_vec(&[1]), rat(0)), Constraint::ge(rat_vec(&[-1]), rat(-1))]);
        assert!(confun_equal(&p, &ConFun::indicator(closed)).unwrap());
    }

    #[test]
    fn p1_unit() {
        let p1 = StackyFan::plain(Fan::from_i64(1, &[&[&[1]], &[&[-1]]]).unwrap());
        let pre = unit_chi_pre(&p1).unwrap();
        assert!(confun_equal(&pre, &ConFun::delta(&rat_vec(&[0]))).unwrap());
        let u = unit_chi(&p1).unwrap();
        let delta = pushforward_covering(&ConFun::delta(&rat_vec(&[0])), &[int_vec(&[1])]).unwrap();
        assert!(confun_equal(&u, &delta).unwrap());
    }

    #[test]
    fn a1_unit_is_not_fiber_finite() {
        let a1 = StackyFan::plain(Fan::from_i64(1, &[&[&[1]]]).unwrap());
        let pre = unit_chi_pre(&a1).unwrap();
        let open_ray = Region::new(1, vec![Constraint::gt(rat_vec(&[1]), rat(0))]);
        assert!(confun_equal(&pre, &ConFun::indicator(open_ray).neg()).unwrap());
        assert!(matches!(unit_chi(&a1), Err(Error::NotFiberFinite(_))));
    }

    #[test]
    fn delta_convolution() {
        let a = ConFun::delta(&rat_vec(&[1, 2]));
        let b = ConFun::delta(&rat_vec(&[-3, 5]));
        let c = convolve(&a, &b).unwrap();
        assert!(confun_equal(&c, &ConFun::delta(&rat_vec(&[-2, 7]))).unwrap());
    }
}
