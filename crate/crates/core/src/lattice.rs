//! Integer linear algebra over finitely generated abelian groups.
//!
//! Matrices act on column vectors: an `m × n` matrix is a map `ℤⁿ → ℤᵐ` whose
//! `j`-th column is the image of `e_j`.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, Int, Rat};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Int::one();
        }
        m
    }

    /// Builds from a list of rows. `cols` is needed when there are no rows.
    pub fn from_rows(rows: Vec<Vec<Int>>, cols: usize) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "row of length {} in a matrix with {cols} columns",
                bad.len()
            )));
        }
        let nrows = rows.len();
        Ok(IntMatrix { rows: nrows, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64_rows(rows: &[&[i64]], cols: usize) -> Self {
        Self::from_rows(rows.iter().map(|r| linalg::int_vec(r)).collect(), cols)
            .expect("ragged literal matrix")
    }

    /// Builds from column vectors, all of length `rows`.
    pub fn from_columns(columns: &[Vec<Int>], rows: usize) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::DimensionMismatch(format!(
                    "column of length {} in a matrix with {rows} rows",
                    c.len()
                )));
            }
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Int> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn rows_vec(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Int>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn rat_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| linalg::to_rat(&self.row(i))).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose {}x{} after {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(v.len(), self.cols, "vector length does not match matrix");
        (0..self.rows)
            .map(|i| (0..self.cols).fold(Int::zero(), |acc, j| acc + self.get(i, j) * &v[j]))
            .collect()
    }

    pub fn apply_rat(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols, "vector length does not match matrix");
        (0..self.rows)
            .map(|i| linalg::dot_int_rat(&self.row(i), v))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Determinant of a square matrix (fraction-free Bareiss elimination).
    pub fn det(&self) -> Int {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut a: Vec<Vec<Int>> = self.rows_vec();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(p) => {
                        a.swap(k, p);
                        sign = -sign;
                    }
                    None => return Int::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * a[n - 1][n - 1].clone()
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.rat_rows(), self.cols)
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch("hstack row counts differ".into()));
        }
        let rows = (0..self.rows)
            .map(|i| {
                let mut r = self.row(i);
                r.extend(other.row(i));
                r
            })
            .collect();
        IntMatrix::from_rows(rows, self.cols + other.cols)
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch("vstack column counts differ".into()));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(IntMatrix { rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        IntMatrix::from_rows(idx.iter().map(|&i| self.row(i)).collect(), self.cols)
            .expect("rows share a width")
    }

    pub fn select_cols(&self, idx: &[usize]) -> IntMatrix {
        self.transpose().select_rows(idx).transpose()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += f · row[src]
    fn add_row(&mut self, dst: usize, src: usize, f: &Int) {
        for j in 0..self.cols {
            let v = self.get(dst, j) + f * self.get(src, j);
            self.set(dst, j, v);
        }
    }

    /// col[dst] += f · col[src]
    fn add_col(&mut self, dst: usize, src: usize, f: &Int) {
        for i in 0..self.rows {
            let v = self.get(i, dst) + f * self.get(i, src);
            self.set(i, dst, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// A homomorphism `ℤ^source_rank → ℤ^target_rank`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeMap {
    matrix: IntMatrix,
}

impl LatticeMap {
    pub fn new(matrix: IntMatrix) -> Self {
        LatticeMap { matrix }
    }

    /// Checks the matrix against declared ranks.
    pub fn with_ranks(source_rank: usize, target_rank: usize, matrix: IntMatrix) -> Result<Self> {
        if matrix.nrows() != target_rank || matrix.ncols() != source_rank {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{} but the map is ℤ^{source_rank} → ℤ^{target_rank}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(LatticeMap { matrix })
    }

    /// The map sending `e_j` to `images[j]`.
    pub fn from_images(images: &[Vec<Int>], target_rank: usize) -> Result<Self> {
        Ok(LatticeMap { matrix: IntMatrix::from_columns(images, target_rank)? })
    }

    pub fn identity(n: usize) -> Self {
        LatticeMap { matrix: IntMatrix::identity(n) }
    }

    pub fn zero(source_rank: usize, target_rank: usize) -> Self {
        LatticeMap { matrix: IntMatrix::zeros(target_rank, source_rank) }
    }

    pub fn source_rank(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn target_rank(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, v: &[Int]) -> Vec<Int> {
        self.matrix.apply(v)
    }

    pub fn apply_rat(&self, v: &[Rat]) -> Vec<Rat> {
        self.matrix.apply_rat(v)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LatticeMap) -> Result<LatticeMap> {
        Ok(LatticeMap { matrix: self.matrix.mul(&inner.matrix)? })
    }

    /// The transpose map between dual lattices.
    pub fn dual(&self) -> LatticeMap {
        LatticeMap { matrix: self.matrix.transpose() }
    }
}

/// Result of `smith_normal_form`: `left · A · right = diagonal`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub left: IntMatrix,
    pub left_inverse: IntMatrix,
    pub diagonal: IntMatrix,
    pub right: IntMatrix,
    pub right_inverse: IntMatrix,
    pub rank: usize,
}

impl SmithDecomposition {
    /// Diagonal entries `d_0, …, d_{min(m,n)-1}`; nonzero ones first.
    pub fn invariants(&self) -> Vec<Int> {
        let k = self.diagonal.nrows().min(self.diagonal.ncols());
        (0..k).map(|i| self.diagonal.get(i, i).clone()).collect()
    }

    /// Product of nonzero diagonal entries.
    pub fn index(&self) -> Int {
        self.invariants()[..self.rank].iter().fold(Int::one(), |a, d| a * d)
    }
}

/// Smith normal form with the pivot rule "smallest absolute value, ties by
/// lowest (row, column)".
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.nrows(), a.ncols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut u_inv = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut v_inv = IntMatrix::identity(n);

    let pick = |d: &IntMatrix, t: usize| -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = d.get(i, j);
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if d.get(bi, bj).abs() <= x.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    };

    let mut t = 0;
    while t < m.min(n) {
        let Some((pi, pj)) = pick(&d, t) else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        u_inv.swap_cols(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        v_inv.swap_rows(t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..m {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = d.get(i, t).div_floor(d.get(t, t));
                let mq = -&q;
                d.add_row(i, t, &mq);
                u.add_row(i, t, &mq);
                u_inv.add_col(t, i, &q);
                if !d.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = d.get(t, j).div_floor(d.get(t, t));
                let mq = -&q;
                d.add_col(j, t, &mq);
                v.add_col(j, t, &mq);
                v_inv.add_row(t, j, &q);
                if !d.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if clean {
                let piv = d.get(t, t).clone();
                let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d.get(i, j).is_multiple_of(&piv)));
                match bad {
                    None => break,
                    Some(i) => {
                        let one = Int::one();
                        d.add_row(t, i, &one);
                        u.add_row(t, i, &one);
                        u_inv.add_col(i, t, &-one);
                    }
                }
            }
            // Re-pivot on the smallest remaining entry.
            let (pi, pj) = pick(&d, t).expect("nonzero entries remain");
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            u_inv.swap_cols(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            v_inv.swap_rows(t, pj);
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
        t += 1;
    }
    SmithDecomposition { left: u, left_inverse: u_inv, diagonal: d, right: v, right_inverse: v_inv, rank: t }
}

/// A finitely generated abelian group `ℤ^free_rank ⊕ ⊕ ℤ/d_i`.
///
/// Elements are written in coordinates: free coordinates first, then one
/// coordinate per invariant factor (reduced into `[0, d_i)`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinAbGroup {
    free_rank: usize,
    invariant_factors: Vec<Int>,
}

impl FinAbGroup {
    pub fn new(free_rank: usize, invariant_factors: Vec<Int>) -> Result<Self> {
        for d in &invariant_factors {
            if *d < Int::from(2) {
                return Err(Error::InvalidGroup(format!("invariant factor {d} is not ≥ 2")));
            }
        }
        for w in invariant_factors.windows(2) {
            if !w[1].is_multiple_of(&w[0]) {
                return Err(Error::InvalidGroup(format!("{} does not divide {}", w[0], w[1])));
            }
        }
        Ok(FinAbGroup { free_rank, invariant_factors })
    }

    pub fn free(rank: usize) -> Self {
        FinAbGroup { free_rank: rank, invariant_factors: Vec::new() }
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn invariant_factors(&self) -> &[Int] {
        &self.invariant_factors
    }

    /// Number of coordinates used to write an element.
    pub fn num_generators(&self) -> usize {
        self.free_rank + self.invariant_factors.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.num_generators() == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_free(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn order(&self) -> Option<Int> {
        self.is_finite()
            .then(|| self.invariant_factors.iter().fold(Int::one(), |a, d| a * d))
    }

    /// Relation matrix: columns are `d_i · e_{free_rank + i}`.
    pub fn relations(&self) -> IntMatrix {
        let g = self.num_generators();
        let cols: Vec<Vec<Int>> = self
            .invariant_factors
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let mut c = vec![Int::zero(); g];
                c[self.free_rank + i] = d.clone();
                c
            })
            .collect();
        IntMatrix::from_columns(&cols, g).expect("relation columns have the right length")
    }

    /// Reduces torsion coordinates into `[0, d_i)`.
    pub fn reduce(&self, element: &[Int]) -> Vec<Int> {
        element
            .iter()
            .enumerate()
            .map(|(i, x)| {
                if i < self.free_rank {
                    x.clone()
                } else {
                    x.mod_floor(&self.invariant_factors[i - self.free_rank])
                }
            })
            .collect()
    }

    pub fn is_zero_element(&self, element: &[Int]) -> bool {
        linalg::is_zero_vec(&self.reduce(element))
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "ℤ".to_string() } else { format!("ℤ^{}", self.free_rank) });
        }
        for d in &self.invariant_factors {
            parts.push(format!("ℤ/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

/// A homomorphism between presented groups, written on generators.
#[derive(Clone, Debug)]
pub struct GroupHom {
    source: FinAbGroup,
    target: FinAbGroup,
    matrix: IntMatrix,
}

impl GroupHom {
    /// Reduces the matrix and checks that torsion generators of the source go
    /// to elements of compatible order.
    pub fn new(source: FinAbGroup, target: FinAbGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.nrows() != target.num_generators() || matrix.ncols() != source.num_generators() {
            return Err(Error::DimensionMismatch(format!(
                "homomorphism {source} → {target} needs a {}x{} matrix, got {}x{}",
                target.num_generators(),
                source.num_generators(),
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let cols: Vec<Vec<Int>> = matrix.columns().iter().map(|c| target.reduce(c)).collect();
        for (i, d) in source.invariant_factors.iter().enumerate() {
            let c = &cols[source.free_rank + i];
            let scaled: Vec<Int> = c.iter().map(|x| x * d).collect();
            if !target.is_zero_element(&scaled) {
                return Err(Error::InvalidGroup(format!(
                    "generator of order {d} maps to an element of incompatible order"
                )));
            }
        }
        let matrix = IntMatrix::from_columns(&cols, target.num_generators())?;
        Ok(GroupHom { source, target, matrix })
    }

    pub fn identity(g: &FinAbGroup) -> Self {
        GroupHom { source: g.clone(), target: g.clone(), matrix: IntMatrix::identity(g.num_generators()) }
    }

    pub fn zero(source: &FinAbGroup, target: &FinAbGroup) -> Self {
        GroupHom {
            source: source.clone(),
            target: target.clone(),
            matrix: IntMatrix::zeros(target.num_generators(), source.num_generators()),
        }
    }

    pub fn source(&self) -> &FinAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FinAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[Int]) -> Vec<Int> {
        self.target.reduce(&self.matrix.apply(x))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &GroupHom) -> Result<GroupHom> {
        if inner.target != self.source {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose through {} and {}",
                inner.target, self.source
            )));
        }
        GroupHom::new(inner.source.clone(), self.target.clone(), self.matrix.mul(&inner.matrix)?)
    }

    /// Cokernel of this homomorphism.
    pub fn cokernel(&self) -> Cokernel {
        let gens = self.matrix.hstack(&self.target.relations()).expect("same row count");
        cokernel_group(&gens)
    }

    /// Generators (as source coordinates) of the kernel.
    pub fn kernel_generators(&self) -> Vec<Vec<Int>> {
        let s = self.source.num_generators();
        let full = self.matrix.hstack(&self.target.relations()).expect("same row count");
        let mut gens: Vec<Vec<Int>> = kernel_basis(&full).into_iter().map(|k| k[..s].to_vec()).collect();
        // Torsion generators of the source are zero already; drop zero vectors.
        gens.retain(|g| !self.source.is_zero_element(g));
        gens
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().group.is_trivial()
    }
}

impl PartialEq for GroupHom {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.target == other.target && self.matrix == other.matrix
    }
}

impl Eq for GroupHom {}

/// A cokernel `ℤ^m / im A` together with the quotient map in coordinates.
#[derive(Clone, Debug)]
pub struct Cokernel {
    pub group: FinAbGroup,
    /// Rows: free coordinates first, then torsion coordinates.
    pub projection: IntMatrix,
}

impl Cokernel {
    pub fn project(&self, v: &[Int]) -> Vec<Int> {
        self.group.reduce(&self.projection.apply(v))
    }

    /// The map onto the torsion-free quotient.
    pub fn torsion_free_projection(&self) -> IntMatrix {
        let idx: Vec<usize> = (0..self.group.free_rank()).collect();
        self.projection.select_rows(&idx)
    }
}

/// Cokernel of `A : ℤⁿ → ℤᵐ`.
pub fn cokernel_group(a: &IntMatrix) -> Cokernel {
    let snf = smith_normal_form(a);
    let m = a.nrows();
    let inv = snf.invariants();
    let torsion: Vec<usize> = (0..snf.rank).filter(|&i| !inv[i].is_one()).collect();
    let mut idx: Vec<usize> = (snf.rank..m).collect();
    idx.extend(torsion.iter().copied());
    let group = FinAbGroup {
        free_rank: m - snf.rank,
        invariant_factors: torsion.iter().map(|&i| inv[i].clone()).collect(),
    };
    Cokernel { group, projection: snf.left.select_rows(&idx) }
}

/// A basis (as vectors) of the saturated kernel of `A`.
pub fn kernel_basis(a: &IntMatrix) -> Vec<Vec<Int>> {
    let snf = smith_normal_form(a);
    (snf.rank..a.ncols()).map(|j| snf.right.col(j)).collect()
}

/// A basis of the lattice generated by `gens` inside `ℤ^ambient`.
pub fn lattice_basis(gens: &[Vec<Int>], ambient: usize) -> Vec<Vec<Int>> {
    let g = IntMatrix::from_columns(gens, ambient).expect("generators share the ambient rank");
    let snf = smith_normal_form(&g);
    let inv = snf.invariants();
    let basis: Vec<Vec<Int>> = (0..snf.rank)
        .map(|i| snf.left_inverse.col(i).iter().map(|x| x * &inv[i]).collect())
        .collect();
    hermite_rows(&basis, ambient)
}

/// A basis of the saturation `ℤ^ambient ∩ ℝ·span(gens)`.
pub fn saturate(gens: &[Vec<Int>], ambient: usize) -> Vec<Vec<Int>> {
    let g = IntMatrix::from_columns(gens, ambient).expect("generators share the ambient rank");
    let snf = smith_normal_form(&g);
    let basis: Vec<Vec<Int>> = (0..snf.rank).map(|i| snf.left_inverse.col(i)).collect();
    hermite_rows(&basis, ambient)
}

/// Index of the lattice generated by `gens` in its saturation.
pub fn saturation_index(gens: &[Vec<Int>], ambient: usize) -> Int {
    let g = IntMatrix::from_columns(gens, ambient).expect("generators share the ambient rank");
    smith_normal_form(&g).index()
}

/// Row-style Hermite normal form of the lattice spanned by `vectors`: an
/// echelon basis with positive pivots and entries above each pivot reduced
/// into `[0, pivot)`. Two generating sets span the same lattice iff their
/// normal forms agree.
pub fn hermite_rows(vectors: &[Vec<Int>], ambient: usize) -> Vec<Vec<Int>> {
    let mut rows: Vec<Vec<Int>> = vectors.iter().filter(|v| !linalg::is_zero_vec(v)).cloned().collect();
    let mut out: Vec<Vec<Int>> = Vec::new();
    let mut col = 0;
    while !rows.is_empty() && col < ambient {
        loop {
            // Smallest nonzero |entry| in this column becomes the pivot row.
            let Some(p) = (0..rows.len())
                .filter(|&i| !rows[i][col].is_zero())
                .min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()))
            else {
                break;
            };
            rows.swap(0, p);
            let mut done = true;
            for i in 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = rows[i][col].div_floor(&rows[0][col]);
                for j in 0..ambient {
                    let v = &rows[i][j] - &q * &rows[0][j];
                    rows[i][j] = v;
                }
                if !rows[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                let mut pivot_row = rows.remove(0);
                if pivot_row[col].is_negative() {
                    pivot_row = linalg::neg_vec(&pivot_row);
                }
                out.push(pivot_row);
                break;
            }
        }
        rows.retain(|v| !linalg::is_zero_vec(v));
        col += 1;
    }
    // Reduce entries above pivots.
    for k in 0..out.len() {
        let pc = (0..ambient).find(|&c| !out[k][c].is_zero()).expect("nonzero row");
        let pv = out[k][pc].clone();
        for i in 0..k {
            let q = out[i][pc].div_floor(&pv);
            if !q.is_zero() {
                for j in 0..ambient {
                    let v = &out[i][j] - &q * &out[k][j];
                    out[i][j] = v;
                }
            }
        }
    }
    out
}

/// Completes a saturated basis of a sublattice: returns `p : ℤⁿ → ℤ^{n-k}`
/// whose kernel is exactly the sublattice, and which is surjective.
pub fn quotient_map(sublattice: &[Vec<Int>], ambient: usize) -> IntMatrix {
    let sat = saturate(sublattice, ambient);
    let g = IntMatrix::from_columns(&sat, ambient).expect("generators share the ambient rank");
    let snf = smith_normal_form(&g);
    let idx: Vec<usize> = (snf.rank..ambient).collect();
    snf.left.select_rows(&idx)
}

/// Whether the rational span of `a` is contained in that of `b`.
pub fn span_contains(b: &[Vec<Int>], a: &[Vec<Int>], ambient: usize) -> bool {
    let r = linalg::rank_int(b, ambient);
    let mut all = b.to_vec();
    all.extend(a.iter().cloned());
    linalg::rank_int(&all, ambient) == r
}
