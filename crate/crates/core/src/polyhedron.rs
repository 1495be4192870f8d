//! Locally closed rational polyhedra given by equalities, weak and strict
//! inequalities, decided exactly by Fourier–Motzkin elimination.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::linalg::{self, Int, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    Eq,
    Gt,
    Ge,
}

/// `normal · x  rel  rhs`
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constraint {
    pub normal: Vec<Rat>,
    pub rhs: Rat,
    pub rel: Rel,
}

enum Normalized {
    Always,
    Never,
    Keep(Constraint),
}

impl Constraint {
    pub fn new(normal: Vec<Rat>, rhs: Rat, rel: Rel) -> Self {
        Constraint { normal, rhs, rel }
    }

    pub fn ge(normal: Vec<Rat>, rhs: Rat) -> Self {
        Self::new(normal, rhs, Rel::Ge)
    }

    pub fn gt(normal: Vec<Rat>, rhs: Rat) -> Self {
        Self::new(normal, rhs, Rel::Gt)
    }

    pub fn eq(normal: Vec<Rat>, rhs: Rat) -> Self {
        Self::new(normal, rhs, Rel::Eq)
    }

    /// Homogeneous `normal · x ≥ 0` with an integer normal.
    pub fn ge_zero(normal: &[Int]) -> Self {
        Self::ge(linalg::to_rat(normal), Rat::zero())
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn holds(&self, x: &[Rat]) -> bool {
        let v = linalg::dot(&self.normal, x);
        match self.rel {
            Rel::Eq => v == self.rhs,
            Rel::Gt => v > self.rhs,
            Rel::Ge => v >= self.rhs,
        }
    }

    /// Constraints whose union is the complement of this one.
    pub fn complement(&self) -> Vec<Constraint> {
        let neg: Vec<Rat> = self.normal.iter().map(|x| -x).collect();
        let nrhs = -self.rhs.clone();
        match self.rel {
            Rel::Ge => vec![Constraint::gt(neg, nrhs)],
            Rel::Gt => vec![Constraint::ge(neg, nrhs)],
            Rel::Eq => vec![
                Constraint::gt(self.normal.clone(), self.rhs.clone()),
                Constraint::gt(neg, nrhs),
            ],
        }
    }

    fn normalize(mut self) -> Normalized {
        let Some(lead) = self.normal.iter().find(|x| !x.is_zero()).cloned() else {
            let ok = match self.rel {
                Rel::Eq => self.rhs.is_zero(),
                Rel::Gt => self.rhs.is_negative(),
                Rel::Ge => !self.rhs.is_positive(),
            };
            return if ok { Normalized::Always } else { Normalized::Never };
        };
        let scale = match self.rel {
            Rel::Eq => lead.recip(),
            _ => lead.abs().recip(),
        };
        if !scale.is_one() {
            for x in self.normal.iter_mut() {
                *x = &*x * &scale;
            }
            self.rhs = &self.rhs * &scale;
        }
        Normalized::Keep(self)
    }

    /// Substitutes `x_i = values[i]` for the leading coordinates.
    fn partial_value(&self, values: &[Rat]) -> Rat {
        values.iter().zip(&self.normal).fold(Rat::zero(), |acc, (v, a)| acc + v * a)
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.normal.iter().map(|x| x.to_string()).collect();
        let op = match self.rel {
            Rel::Eq => "=",
            Rel::Gt => ">",
            Rel::Ge => ">=",
        };
        write!(f, "({})·x {op} {}", terms.join(", "), self.rhs)
    }
}

/// A conjunction of constraints: a convex, locally closed polyhedron in ℚⁿ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Region {
    dim: usize,
    constraints: Vec<Constraint>,
}

impl Region {
    pub fn new(dim: usize, constraints: Vec<Constraint>) -> Self {
        assert!(constraints.iter().all(|c| c.dim() == dim), "constraint has the wrong dimension");
        Region { dim, constraints }
    }

    pub fn whole(dim: usize) -> Self {
        Region { dim, constraints: Vec::new() }
    }

    pub fn empty(dim: usize) -> Self {
        Region { dim, constraints: vec![Constraint::ge(vec![Rat::zero(); dim], Rat::one())] }
    }

    pub fn point(p: &[Rat]) -> Self {
        let n = p.len();
        let constraints = (0..n)
            .map(|i| {
                let mut e = vec![Rat::zero(); n];
                e[i] = Rat::one();
                Constraint::eq(e, p[i].clone())
            })
            .collect();
        Region { dim: n, constraints }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn with(&self, c: Constraint) -> Region {
        assert_eq!(c.dim(), self.dim);
        let mut r = self.clone();
        r.constraints.push(c);
        r
    }

    pub fn intersect(&self, other: &Region) -> Region {
        assert_eq!(self.dim, other.dim, "intersecting regions of different dimension");
        let mut r = self.clone();
        r.constraints.extend(other.constraints.iter().cloned());
        r
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.constraints.iter().all(|c| c.holds(x))
    }

    /// Drops trivially true constraints and duplicates.
    pub fn simplified(&self) -> Region {
        match normalize_all(self.constraints.clone()) {
            Some(cs) => Region { dim: self.dim, constraints: cs },
            None => Region::empty(self.dim),
        }
    }

    /// Some rational point of the region, preferring small coordinates.
    pub fn sample(&self) -> Option<Vec<Rat>> {
        let levels = elimination_levels(&self.constraints, self.dim)?;
        let mut x: Vec<Rat> = Vec::with_capacity(self.dim);
        for k in 1..=self.dim {
            let cs = &levels[self.dim - k];
            x.push(choose_value(cs, &x, k - 1));
        }
        debug_assert!(self.contains(&x));
        Some(x)
    }

    pub fn is_empty(&self) -> bool {
        elimination_levels(&self.constraints, self.dim).is_none()
    }

    /// Image under the projection onto the first `k` coordinates.
    pub fn project_prefix(&self, k: usize) -> Region {
        assert!(k <= self.dim);
        let Some(mut cs) = normalize_all(self.constraints.clone()) else {
            return Region::empty(k);
        };
        for n in (k + 1..=self.dim).rev() {
            match eliminate_last(&cs, n) {
                Some(next) => cs = next,
                None => return Region::empty(k),
            }
        }
        Region { dim: k, constraints: cs }
    }

    /// Whether every point of `self` lies in `other`.
    pub fn is_subset_of(&self, other: &Region) -> bool {
        other.constraints.iter().all(|c| {
            c.complement().into_iter().all(|nc| self.with(nc).is_empty())
        })
    }

    /// Dimension of the affine hull, or `None` when empty.
    pub fn affine_dim(&self) -> Option<usize> {
        if self.is_empty() {
            return None;
        }
        let mut eqs: Vec<Vec<Rat>> = Vec::new();
        for c in &self.constraints {
            let implicit = match c.rel {
                Rel::Eq => true,
                Rel::Gt => false,
                Rel::Ge => self.with(Constraint::gt(c.normal.clone(), c.rhs.clone())).is_empty(),
            };
            if implicit {
                eqs.push(c.normal.clone());
            }
        }
        Some(self.dim - linalg::rank(&eqs, self.dim))
    }

    /// Splits into disjoint relatively open convex cells by resolving every
    /// weak inequality into an equality or a strict inequality.
    pub fn open_cells(&self) -> Vec<Region> {
        let Some(cs) = normalize_all(self.constraints.clone()) else {
            return Vec::new();
        };
        let (fixed, weak): (Vec<Constraint>, Vec<Constraint>) =
            cs.into_iter().partition(|c| c.rel != Rel::Ge);
        let mut out = Vec::new();
        let start = Region { dim: self.dim, constraints: fixed };
        if start.is_empty() {
            return out;
        }
        split_weak(start, &weak, &mut out);
        out
    }

    /// Compactly supported Euler characteristic of the region.
    pub fn chi_c(&self) -> Int {
        self.open_cells()
            .iter()
            .map(|c| sign_of_dim(c.open_cell_dim()))
            .fold(Int::zero(), |a, b| a + b)
    }

    /// Dimension of a nonempty cell made of equalities and strict inequalities.
    pub fn open_cell_dim(&self) -> usize {
        let eqs: Vec<Vec<Rat>> = self
            .constraints
            .iter()
            .filter(|c| c.rel == Rel::Eq)
            .map(|c| c.normal.clone())
            .collect();
        self.dim - linalg::rank(&eqs, self.dim)
    }

    /// Recession cone, as a homogeneous region (meaningful when nonempty).
    pub fn recession(&self) -> Region {
        let constraints = self
            .constraints
            .iter()
            .map(|c| {
                let rel = if c.rel == Rel::Eq { Rel::Eq } else { Rel::Ge };
                Constraint::new(c.normal.clone(), Rat::zero(), rel)
            })
            .collect();
        Region { dim: self.dim, constraints }
    }

    /// Pulls the region back along `x = t · y + offset`, where `t` has
    /// `self.dim` rows and `new_dim` columns.
    pub fn pullback(&self, t: &[Vec<Rat>], offset: &[Rat], new_dim: usize) -> Region {
        assert_eq!(t.len(), self.dim);
        let constraints = self
            .constraints
            .iter()
            .map(|c| {
                let normal: Vec<Rat> = (0..new_dim)
                    .map(|j| (0..self.dim).fold(Rat::zero(), |acc, i| acc + &c.normal[i] * &t[i][j]))
                    .collect();
                let rhs = &c.rhs - linalg::dot(&c.normal, offset);
                Constraint::new(normal, rhs, c.rel)
            })
            .collect();
        Region { dim: new_dim, constraints }
    }

    /// Places the region's coordinates at `offset..offset + dim` inside ℚ^new_dim.
    pub fn embed(&self, new_dim: usize, offset: usize) -> Region {
        assert!(offset + self.dim <= new_dim);
        let constraints = self
            .constraints
            .iter()
            .map(|c| {
                let mut normal = vec![Rat::zero(); new_dim];
                normal[offset..offset + self.dim].clone_from_slice(&c.normal);
                Constraint::new(normal, c.rhs.clone(), c.rel)
            })
            .collect();
        Region { dim: new_dim, constraints }
    }

    /// Translate by `v`.
    pub fn translate(&self, v: &[Rat]) -> Region {
        let constraints = self
            .constraints
            .iter()
            .map(|c| Constraint::new(c.normal.clone(), &c.rhs + linalg::dot(&c.normal, v), c.rel))
            .collect();
        Region { dim: self.dim, constraints }
    }

    /// Exact lower and upper bounds of a linear functional, with whether
    /// each is attained. `None` means unbounded in that direction.
    pub fn bounds(&self, f: &[Rat]) -> Option<(Option<(Rat, bool)>, Option<(Rat, bool)>)> {
        // Adjoin t = f·x as the first coordinate, then project onto it.
        let n = self.dim;
        let mut t = vec![vec![Rat::zero(); n]; n];
        for (i, row) in t.iter_mut().enumerate() {
            row[i] = Rat::one();
        }
        let lifted = self.embed(n + 1, 1).with({
            let mut normal = vec![-Rat::one()];
            normal.extend(f.iter().cloned());
            Constraint::eq(normal, Rat::zero())
        });
        let proj = lifted.project_prefix(1);
        if proj.is_empty() {
            return None;
        }
        let mut lo: Option<(Rat, bool)> = None;
        let mut hi: Option<(Rat, bool)> = None;
        for c in proj.constraints {
            let a = c.normal[0].clone();
            let v = &c.rhs / &a;
            let closed = c.rel != Rel::Gt;
            if c.rel == Rel::Eq {
                return Some((Some((v.clone(), true)), Some((v, true))));
            }
            if a.is_positive() {
                if lo.as_ref().is_none_or(|(l, lc)| v > *l || (v == *l && *lc && !closed)) {
                    lo = Some((v, closed));
                }
            } else if hi.as_ref().is_none_or(|(h, hc)| v < *h || (v == *h && *hc && !closed)) {
                hi = Some((v, closed));
            }
        }
        Some((lo, hi))
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.constraints.is_empty() {
            return write!(f, "ℚ^{}", self.dim);
        }
        let parts: Vec<String> = self.constraints.iter().map(|c| c.to_string()).collect();
        write!(f, "{{{}}}", parts.join(" ∧ "))
    }
}

pub fn sign_of_dim(d: usize) -> Int {
    if d % 2 == 0 {
        Int::one()
    } else {
        -Int::one()
    }
}

fn split_weak(base: Region, weak: &[Constraint], out: &mut Vec<Region>) {
    let Some((first, rest)) = weak.split_first() else {
        out.push(base);
        return;
    };
    for rel in [Rel::Eq, Rel::Gt] {
        let r = base.with(Constraint::new(first.normal.clone(), first.rhs.clone(), rel));
        if !r.is_empty() {
            split_weak(r, rest, out);
        }
    }
}

/// Normalizes, drops tautologies and keeps the strongest of parallel
/// inequalities. `None` if some constraint is unsatisfiable on its own.
fn normalize_all(cs: Vec<Constraint>) -> Option<Vec<Constraint>> {
    let mut out: Vec<Constraint> = Vec::with_capacity(cs.len());
    for c in cs {
        match c.normalize() {
            Normalized::Always => {}
            Normalized::Never => return None,
            Normalized::Keep(c) => {
                if let Some(prev) = out.iter_mut().find(|p| p.normal == c.normal && (p.rel == Rel::Eq) == (c.rel == Rel::Eq)) {
                    if c.rel == Rel::Eq {
                        if prev.rhs != c.rhs {
                            return None;
                        }
                    } else if c.rhs > prev.rhs || (c.rhs == prev.rhs && c.rel == Rel::Gt) {
                        *prev = c;
                    }
                } else {
                    out.push(c);
                }
            }
        }
    }
    out.sort();
    Some(out)
}

/// Eliminates coordinate `n - 1` from constraints on `n` coordinates.
fn eliminate_last(cs: &[Constraint], n: usize) -> Option<Vec<Constraint>> {
    let j = n - 1;
    let truncate = |c: Constraint| Constraint::new(c.normal[..j].to_vec(), c.rhs, c.rel);

    if let Some(ei) = cs.iter().position(|c| c.rel == Rel::Eq && !c.normal[j].is_zero()) {
        let e = &cs[ei];
        let mut next = Vec::with_capacity(cs.len());
        for (i, c) in cs.iter().enumerate() {
            if i == ei {
                continue;
            }
            if c.normal[j].is_zero() {
                next.push(truncate(c.clone()));
                continue;
            }
            let f = &c.normal[j] / &e.normal[j];
            let normal: Vec<Rat> = c.normal[..j].iter().zip(&e.normal[..j]).map(|(a, b)| a - &f * b).collect();
            next.push(Constraint::new(normal, &c.rhs - &f * &e.rhs, c.rel));
        }
        return normalize_all(next);
    }

    let mut next = Vec::new();
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for c in cs {
        if c.normal[j].is_zero() {
            next.push(truncate(c.clone()));
        } else if c.normal[j].is_positive() {
            lower.push(c);
        } else {
            upper.push(c);
        }
    }
    for l in &lower {
        for u in &upper {
            let fl = l.normal[j].recip();
            let fu = (-&u.normal[j]).recip();
            let normal: Vec<Rat> = (0..j).map(|k| &l.normal[k] * &fl + &u.normal[k] * &fu).collect();
            let rhs = &l.rhs * &fl + &u.rhs * &fu;
            let rel = if l.rel == Rel::Gt || u.rel == Rel::Gt { Rel::Gt } else { Rel::Ge };
            next.push(Constraint::new(normal, rhs, rel));
        }
    }
    normalize_all(next)
}

/// `levels[i]` constrains the first `n - i` coordinates. `None` if infeasible.
fn elimination_levels(cs: &[Constraint], n: usize) -> Option<Vec<Vec<Constraint>>> {
    let mut levels = vec![normalize_all(cs.to_vec())?];
    for k in (1..=n).rev() {
        let next = eliminate_last(levels.last().expect("nonempty"), k)?;
        levels.push(next);
    }
    Some(levels)
}

/// Picks coordinate `j` given the earlier coordinates, from constraints on
/// coordinates `0..=j` that are known to be jointly feasible.
fn choose_value(cs: &[Constraint], prefix: &[Rat], j: usize) -> Rat {
    let mut lo: Option<(Rat, bool)> = None;
    let mut hi: Option<(Rat, bool)> = None;
    for c in cs {
        let a = &c.normal[j];
        if a.is_zero() {
            continue;
        }
        let v = (&c.rhs - c.partial_value(prefix)) / a;
        match c.rel {
            Rel::Eq => return v,
            rel => {
                let strict = rel == Rel::Gt;
                if a.is_positive() {
                    if lo.as_ref().is_none_or(|(l, ls)| v > *l || (v == *l && strict && !ls)) {
                        lo = Some((v, strict));
                    }
                } else if hi.as_ref().is_none_or(|(h, hs)| v < *h || (v == *h && strict && !hs)) {
                    hi = Some((v, strict));
                }
            }
        }
    }
    nice_value(lo, hi)
}

fn nice_value(lo: Option<(Rat, bool)>, hi: Option<(Rat, bool)>) -> Rat {
    let ok = |v: &Rat| {
        lo.as_ref().is_none_or(|(l, s)| if *s { v > l } else { v >= l })
            && hi.as_ref().is_none_or(|(h, s)| if *s { v < h } else { v <= h })
    };
    let zero = Rat::zero();
    if ok(&zero) {
        return zero;
    }
    // The admissible interval lies on one side of 0; try the integer nearest 0.
    let candidate = match (&lo, &hi) {
        (Some((l, _)), _) if l.is_positive() || l.is_zero() => {
            let c = l.floor() + Rat::one();
            let c2 = l.ceil();
            if ok(&c2) { c2 } else { c }
        }
        (_, Some((h, _))) => {
            let c = h.ceil() - Rat::one();
            let c2 = h.floor();
            if ok(&c2) { c2 } else { c }
        }
        _ => unreachable!("unbounded interval contains 0"),
    };
    if ok(&candidate) {
        return candidate;
    }
    match (lo, hi) {
        (Some((l, _)), Some((h, _))) => (l + h) / Rat::from_integer(Int::from(2)),
        _ => unreachable!("a half-line always contains an integer"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frac, rat, rat_vec};

    fn ge(n: &[i64], c: i64) -> Constraint {
        Constraint::ge(rat_vec(n), rat(c))
    }
    fn gt(n: &[i64], c: i64) -> Constraint {
        Constraint::gt(rat_vec(n), rat(c))
    }
    fn eq(n: &[i64], c: i64) -> Constraint {
        Constraint::eq(rat_vec(n), rat(c))
    }

    #[test]
    fn feasibility_and_sampling() {
        let r = Region::new(2, vec![gt(&[1, 0], 1), gt(&[-1, 1], 0)]);
        let p = r.sample().unwrap();
        assert!(r.contains(&p));
        let r = Region::new(1, vec![gt(&[1], 0), gt(&[-1], 0)]);
        assert!(r.is_empty());
        let r = Region::new(1, vec![ge(&[1], 0), ge(&[-1], 0)]);
        assert_eq!(r.sample().unwrap(), rat_vec(&[0]));
        // Open interval (0, 1) needs a midpoint.
        let r = Region::new(1, vec![gt(&[1], 0), gt(&[-1], -1)]);
        assert_eq!(r.sample().unwrap(), vec![frac(1, 2)]);
    }

    #[test]
    fn projection_keeps_strictness() {
        // {(x, y) : y > 0, x > y} projects to x > 0.
        let r = Region::new(2, vec![gt(&[0, 1], 0), gt(&[1, -1], 0)]);
        let p = r.project_prefix(1);
        assert!(!p.contains(&rat_vec(&[0])));
        assert!(p.contains(&[frac(1, 100)]));
    }

    #[test]
    fn dimensions_and_euler() {
        let closed_interval = Region::new(1, vec![ge(&[1], 0), ge(&[-1], -1)]);
        assert_eq!(closed_interval.affine_dim(), Some(1));
        assert_eq!(closed_interval.chi_c(), Int::one());
        let half_open = Region::new(1, vec![ge(&[1], 0), gt(&[-1], -1)]);
        assert_eq!(half_open.chi_c(), Int::zero());
        let ray = Region::new(1, vec![ge(&[1], 0)]);
        assert_eq!(ray.chi_c(), Int::zero());
        let open_plane = Region::whole(2);
        assert_eq!(open_plane.chi_c(), Int::one());
        let line = Region::new(2, vec![eq(&[1, 1], 0)]);
        assert_eq!(line.affine_dim(), Some(1));
        assert_eq!(line.chi_c(), -Int::one());
        let flat = Region::new(2, vec![ge(&[1, 0], 0), ge(&[-1, 0], 0)]);
        assert_eq!(flat.affine_dim(), Some(1));
    }

    #[test]
    fn subset_and_bounds() {
        let a = Region::new(1, vec![gt(&[1], 1)]);
        let b = Region::new(1, vec![ge(&[1], 0)]);
        assert!(a.is_subset_of(&b));
        assert!(!b.is_subset_of(&a));
        let (lo, hi) = a.bounds(&rat_vec(&[2])).unwrap();
        assert_eq!(lo, Some((rat(2), false)));
        assert_eq!(hi, None);
    }
}
