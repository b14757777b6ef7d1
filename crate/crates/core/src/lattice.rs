//! Exact integer linear algebra over arbitrary-precision integers.
//!
//! Everything downstream (local-coefficient cochains, Meyer forms, necklace
//! intersection matrices) is expressed through [`IntVec`] and [`IntMat`], and
//! all group computations go through [`smith_normal_form`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not unimodular (determinant {det})")]
    NotUnimodular { det: BigInt },
}

/// An integer vector in ℤⁿ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntVec(Vec<BigInt>);

impl IntVec {
    pub fn new(entries: Vec<BigInt>) -> Self {
        IntVec(entries)
    }

    pub fn from_i64s(entries: &[i64]) -> Self {
        IntVec(entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        IntVec(vec![BigInt::zero(); dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = BigInt::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Gcd of the entries; zero for the zero vector.
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
    }

    /// A nonzero vector whose entries have gcd one.
    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    pub fn dot(&self, other: &IntVec) -> BigInt {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, k: &BigInt) -> IntVec {
        IntVec(self.0.iter().map(|x| x * k).collect())
    }

    /// Negates the vector if needed so its first nonzero entry is positive.
    pub fn normalized_sign(mut self) -> IntVec {
        if let Some(first) = self.0.iter().find(|x| !x.is_zero()) {
            if first.is_negative() {
                self.0.iter_mut().for_each(|x| *x = -&*x);
            }
        }
        self
    }

    /// Integer entries as `i64` when every entry fits.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.0.iter().map(|x| x.to_i64()).collect()
    }
}

impl std::ops::Index<usize> for IntVec {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl Add for &IntVec {
    type Output = IntVec;
    fn add(self, rhs: &IntVec) -> IntVec {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        IntVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &IntVec {
    type Output = IntVec;
    fn sub(self, rhs: &IntVec) -> IntVec {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        IntVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &IntVec {
    type Output = IntVec;
    fn neg(self) -> IntVec {
        IntVec(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for IntVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// A dense row-major integer matrix. Zero rows or columns are allowed so that
/// maps out of (or into) the zero group need no special casing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self, LatticeError> {
        if data.len() != rows * cols {
            return Err(LatticeError::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(IntMat { rows, cols, data })
    }

    /// Builds a matrix from fixed-width `i64` rows; handy for small literals.
    pub fn from_rows<const C: usize>(rows: &[[i64; C]]) -> Self {
        IntMat {
            rows: rows.len(),
            cols: C,
            data: rows.iter().flatten().map(|&x| BigInt::from(x)).collect(),
        }
    }

    /// Matrix whose columns are the given vectors, all of dimension `dim`.
    pub fn from_columns(dim: usize, columns: &[IntVec]) -> Result<Self, LatticeError> {
        let mut m = Self::zeros(dim, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.dim() != dim {
                return Err(LatticeError::DimensionMismatch {
                    expected: dim,
                    found: c.dim(),
                });
            }
            for i in 0..dim {
                m[(i, j)] = c[i].clone();
            }
        }
        Ok(m)
    }

    /// 2×2 matrix from row-major entries.
    pub fn mat2(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::from_rows(&[[a, b], [c, d]])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> IntVec {
        IntVec(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn column(&self, j: usize) -> IntVec {
        IntVec((0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn columns(&self) -> Vec<IntVec> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &IntVec) -> IntVec {
        assert_eq!(self.cols, v.dim(), "matrix-vector dimension mismatch");
        IntVec(
            (0..self.rows)
                .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
                .collect(),
        )
    }

    /// Places `block` with its top-left corner at `(row, col)`.
    pub fn set_block(&mut self, row: usize, col: usize, block: &IntMat) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(row + i, col + j)] = block[(i, j)].clone();
            }
        }
    }

    /// Entries as nested `i64` rows when every entry fits.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows).map(|i| self.row(i).to_i64s()).collect()
    }

    /// Integer power by repeated squaring; negative exponents require a
    /// unimodular square matrix.
    pub fn pow(&self, exp: i64) -> Result<IntMat, LatticeError> {
        if !self.is_square() {
            return Err(LatticeError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut base = if exp < 0 {
            unimodular_inverse(self)?
        } else {
            self.clone()
        };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
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

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * k;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * k;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let x = &mut self.data[r * self.cols + j];
            *x = -&*x;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMat {
    type Output = IntMat;
    fn mul(self, rhs: &IntMat) -> IntMat {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = IntMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * &rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &IntMat {
    type Output = IntMat;
    fn add(self, rhs: &IntMat) -> IntMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        IntMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &IntMat {
    type Output = IntMat;
    fn sub(self, rhs: &IntMat) -> IntMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        IntMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &IntMat {
    type Output = IntMat;
    fn neg(self) -> IntMat {
        IntMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}

impl fmt::Display for IntMat {
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
                write!(f, "{}", self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// `left · A · right = diag(diag) padded with zeros`, with both factors
/// unimodular and the nonzero diagonal a divisibility chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub left: IntMat,
    pub diag: Vec<BigInt>,
    pub right: IntMat,
}

impl SmithDecomposition {
    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.diag.iter().take_while(|d| !d.is_zero()).count()
    }

    /// The diagonal matrix `left · A · right` of the given shape.
    pub fn diagonal_matrix(&self) -> IntMat {
        let mut d = IntMat::zeros(self.left.rows(), self.right.cols());
        for (i, x) in self.diag.iter().enumerate() {
            d[(i, i)] = x.clone();
        }
        d
    }
}

/// Finitely generated abelian group `ℤ^free_rank ⊕ ⊕ ℤ/t_i`, invariant-factor form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// Builds a group from arbitrary cyclic orders, re-normalising them into
    /// invariant factors. Orders 0 become free summands, orders ±1 vanish.
    pub fn from_cyclic_orders(free_rank: usize, orders: &[BigInt]) -> Self {
        let n = orders.len();
        let mut m = IntMat::zeros(n, n);
        for (i, d) in orders.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        let mut g = cokernel(&m);
        g.free_rank += free_rank;
        g
    }

    pub fn from_i64(free_rank: usize, torsion: &[i64]) -> Self {
        let orders: Vec<BigInt> = torsion.iter().map(|&t| BigInt::from(t)).collect();
        Self::from_cyclic_orders(free_rank, &orders)
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        let orders: Vec<BigInt> = self.torsion.iter().chain(&other.torsion).cloned().collect();
        Self::from_cyclic_orders(self.free_rank + other.free_rank, &orders)
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Smith normal form by elementary row and column operations.
///
/// Pivots are chosen as the entry of smallest absolute value in the active
/// block, ties broken by the lowest row-major index, which makes the output
/// deterministic.
pub fn smith_normal_form(a: &IntMat) -> SmithDecomposition {
    let (rows, cols) = (a.rows(), a.cols());
    let mut m = a.clone();
    let mut left = IntMat::identity(rows);
    let mut right = IntMat::identity(cols);
    let mut diag = Vec::with_capacity(rows.min(cols));

    for t in 0..rows.min(cols) {
        loop {
            let Some((pr, pc)) = smallest_entry(&m, t) else {
                // active block is zero
                break;
            };
            m.swap_rows(t, pr);
            left.swap_rows(t, pr);
            m.swap_cols(t, pc);
            right.swap_cols(t, pc);

            let mut clean = true;
            for i in t + 1..rows {
                if m[(i, t)].is_zero() {
                    continue;
                }
                let q = m[(i, t)].div_floor(&m[(t, t)]);
                let k = -q;
                m.add_row_multiple(i, t, &k);
                left.add_row_multiple(i, t, &k);
                if !m[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if m[(t, j)].is_zero() {
                    continue;
                }
                let q = m[(t, j)].div_floor(&m[(t, t)]);
                let k = -q;
                m.add_col_multiple(j, t, &k);
                right.add_col_multiple(j, t, &k);
                if !m[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Row and column are cleared; enforce divisibility on the rest.
            let pivot = m[(t, t)].clone();
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !m[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    m.add_row_multiple(t, i, &one);
                    left.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if m[(t, t)].is_negative() {
            m.negate_row(t);
            left.negate_row(t);
        }
        diag.push(m[(t, t)].clone());
    }

    SmithDecomposition { left, diag, right }
}

fn smallest_entry(m: &IntMat, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in t..m.rows() {
        for j in t..m.cols() {
            let v = &m[(i, j)];
            if v.is_zero() {
                continue;
            }
            let a = v.abs();
            if best.as_ref().is_none_or(|(_, b)| a < *b) {
                best = Some(((i, j), a));
            }
        }
    }
    best.map(|(pos, _)| pos)
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det(a: &IntMat) -> Result<BigInt, LatticeError> {
    if !a.is_square() {
        return Err(LatticeError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                Some(i) => {
                    m.swap_rows(k, i);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                m[(i, j)] = v;
            }
        }
        prev = m[(k, k)].clone();
    }
    Ok(sign * &m[(n - 1, n - 1)])
}

/// Determinant of the 2×2 matrix with columns `u`, `v`.
pub fn det2(u: &IntVec, v: &IntVec) -> BigInt {
    assert!(u.dim() == 2 && v.dim() == 2, "det2 expects vectors in Z^2");
    &u[0] * &v[1] - &u[1] * &v[0]
}

/// Integer inverse of a matrix with determinant ±1.
pub fn unimodular_inverse(a: &IntMat) -> Result<IntMat, LatticeError> {
    let d = det(a)?;
    if !d.abs().is_one() {
        return Err(LatticeError::NotUnimodular { det: d });
    }
    // L·A·R = I, hence A⁻¹ = R·L.
    let snf = smith_normal_form(a);
    Ok(&snf.right * &snf.left)
}

/// `ℤ^rows / image(A)` for `A : ℤ^cols → ℤ^rows`.
pub fn cokernel(a: &IntMat) -> AbelianGroup {
    let snf = smith_normal_form(a);
    let r = snf.rank();
    AbelianGroup {
        free_rank: a.rows() - r,
        torsion: snf.diag[..r].iter().filter(|d| !d.is_one()).cloned().collect(),
    }
}

/// Rank over ℚ.
pub fn rank(a: &IntMat) -> usize {
    smith_normal_form(a).rank()
}

/// A ℤ-basis of `ker A ⊆ ℤ^cols`, as the columns of the returned matrix.
/// The kernel is saturated, so this is also a ℚ-basis of the rational kernel.
pub fn kernel_basis(a: &IntMat) -> IntMat {
    let snf = smith_normal_form(a);
    let r = snf.rank();
    let n = a.cols();
    let mut k = IntMat::zeros(n, n - r);
    for (c, j) in (r..n).enumerate() {
        for i in 0..n {
            k[(i, c)] = snf.right[(i, j)].clone();
        }
    }
    k
}

/// Some integer `x` with `A·x = b`, or `None` when only rational solutions exist.
pub fn integer_solve(a: &IntMat, b: &IntVec) -> Result<Option<IntVec>, LatticeError> {
    if b.dim() != a.rows() {
        return Err(LatticeError::DimensionMismatch {
            expected: a.rows(),
            found: b.dim(),
        });
    }
    let snf = smith_normal_form(a);
    let r = snf.rank();
    let c = snf.left.mul_vec(b);
    let mut y = IntVec::zeros(a.cols());
    for i in 0..a.rows() {
        if i < r {
            let (q, rem) = c[i].div_rem(&snf.diag[i]);
            if !rem.is_zero() {
                return Ok(None);
            }
            y.0[i] = q;
        } else if !c[i].is_zero() {
            return Ok(None);
        }
    }
    Ok(Some(snf.right.mul_vec(&y)))
}

/// Whether the vectors span a rank-k direct summand of ℤⁿ: linearly
/// independent with all Smith invariant factors equal to one.
pub fn is_primitive_tuple(vectors: &[IntVec]) -> Result<bool, LatticeError> {
    let Some(first) = vectors.first() else {
        return Ok(true);
    };
    let n = first.dim();
    let a = IntMat::from_columns(n, vectors)?;
    let snf = smith_normal_form(&a);
    let k = vectors.len();
    Ok(snf.rank() == k && snf.diag.iter().all(|d| d.is_one()))
}

/// Extends a primitive tuple to a basis of ℤⁿ; the given vectors come first.
/// Returns `None` when the tuple is not primitive.
pub fn complete_to_basis(vectors: &[IntVec], n: usize) -> Result<Option<IntMat>, LatticeError> {
    let a = IntMat::from_columns(n, vectors)?;
    let snf = smith_normal_form(&a);
    let k = vectors.len();
    if snf.rank() != k || !snf.diag.iter().all(|d| d.is_one()) {
        return Ok(None);
    }
    // L·A·R = [I;0] gives L⁻¹ = [A·R | W]; then [A | W] = L⁻¹·diag(R⁻¹, I).
    let l_inv = unimodular_inverse(&snf.left)?;
    let mut out = IntMat::zeros(n, n);
    out.set_block(0, 0, &a);
    for j in k..n {
        for i in 0..n {
            out[(i, j)] = l_inv[(i, j)].clone();
        }
    }
    Ok(Some(out))
}

/// Canonical basis of the lattice spanned by `vectors` in ℤⁿ: row-style
/// Hermite normal form, pivots positive, entries above pivots reduced.
pub fn hermite_basis(vectors: &[IntVec], n: usize) -> Result<Vec<IntVec>, LatticeError> {
    for v in vectors {
        if v.dim() != n {
            return Err(LatticeError::DimensionMismatch {
                expected: n,
                found: v.dim(),
            });
        }
    }
    let mut rows: Vec<IntVec> = vectors.to_vec();
    let mut out: Vec<IntVec> = Vec::new();
    for col in 0..n {
        // gcd-reduce the column among the remaining rows
        loop {
            let nonzero: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i][col].is_zero()).collect();
            if nonzero.len() <= 1 {
                break;
            }
            let p = *nonzero.iter().min_by_key(|&&i| rows[i][col].abs()).expect("nonempty");
            let pivot = rows[p].clone();
            for &i in &nonzero {
                if i == p {
                    continue;
                }
                let q = rows[i][col].div_floor(&pivot[col]);
                rows[i] = &rows[i] - &pivot.scale(&q);
            }
        }
        if let Some(i) = (0..rows.len()).find(|&i| !rows[i][col].is_zero()) {
            let mut pivot = rows.remove(i);
            if pivot[col].is_negative() {
                pivot = -&pivot;
            }
            for prev in out.iter_mut() {
                let q = prev[col].div_floor(&pivot[col]);
                *prev = &*prev - &pivot.scale(&q);
            }
            out.push(pivot);
        }
        rows.retain(|r| !r.is_zero());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn check_snf(a: &IntMat) -> SmithDecomposition {
        let s = smith_normal_form(a);
        assert_eq!(&(&s.left * a) * &s.right, s.diagonal_matrix(), "factorisation of {a}");
        assert!(det(&s.left).unwrap().abs().is_one());
        assert!(det(&s.right).unwrap().abs().is_one());
        let r = s.rank();
        assert!(s.diag[r..].iter().all(Zero::is_zero));
        for w in s.diag[..r].windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        assert!(s.diag.iter().all(|d| !d.is_negative()));
        s
    }

    #[test]
    fn snf_identity_and_zero() {
        assert_eq!(check_snf(&IntMat::identity(2)).diag, vec![big(1), big(1)]);
        assert_eq!(check_snf(&IntMat::zeros(1, 1)).diag, vec![big(0)]);
    }

    #[test]
    fn snf_two_by_two() {
        let s = check_snf(&IntMat::mat2(2, 4, 6, 8));
        assert_eq!(s.diag, vec![big(2), big(4)]);
    }

    #[test]
    fn snf_needs_divisibility_fix() {
        // diag(2,3) is not in Smith form; it becomes diag(1,6).
        let s = check_snf(&IntMat::mat2(2, 0, 0, 3));
        assert_eq!(s.diag, vec![big(1), big(6)]);
    }

    #[test]
    fn snf_handles_empty_shapes() {
        let s = check_snf(&IntMat::zeros(2, 0));
        assert!(s.diag.is_empty());
        assert_eq!(s.left, IntMat::identity(2));
        let s = check_snf(&IntMat::zeros(0, 3));
        assert_eq!(s.right, IntMat::identity(3));
    }

    #[test]
    fn snf_large_entries_do_not_overflow() {
        let a = IntMat::from_rows(&[[i64::MAX, i64::MAX - 1], [i64::MAX - 2, i64::MAX - 7]]);
        check_snf(&a);
    }

    #[test]
    fn primitive_tuple_examples() {
        let e = |v: &[i64]| IntVec::from_i64s(v);
        assert!(is_primitive_tuple(&[e(&[1, 0, 0]), e(&[0, 1, 0])]).unwrap());
        assert!(!is_primitive_tuple(&[e(&[2, 0])]).unwrap());
        assert!(!is_primitive_tuple(&[e(&[4, -1]), e(&[1, 1])]).unwrap());
        assert!(is_primitive_tuple(&[]).unwrap());
        assert!(!is_primitive_tuple(&[e(&[1, 2]), e(&[2, 4])]).unwrap());
        assert!(matches!(
            is_primitive_tuple(&[e(&[1, 0]), e(&[1, 0, 0])]),
            Err(LatticeError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(det(&IntMat::identity(3)).unwrap(), big(1));
        // columns u1 = (4,-1), u2 = (1,1)
        assert_eq!(det(&IntMat::mat2(4, 1, -1, 1)).unwrap(), big(5));
        assert_eq!(det(&IntMat::mat2(3, 1, -1, 0)).unwrap(), big(1));
        assert_eq!(
            det(&IntMat::from_rows(&[[0, 1, 2], [3, 4, 5], [6, 7, 9]])).unwrap(),
            big(-3)
        );
        assert!(matches!(det(&IntMat::zeros(2, 3)), Err(LatticeError::NotSquare { .. })));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(unimodular_inverse(&IntMat::identity(2)).unwrap(), IntMat::identity(2));
        assert_eq!(
            unimodular_inverse(&IntMat::mat2(3, 1, -1, 0)).unwrap(),
            IntMat::mat2(0, -1, 1, 3)
        );
        assert!(matches!(
            unimodular_inverse(&IntMat::mat2(2, 0, 0, 2)),
            Err(LatticeError::NotUnimodular { .. })
        ));
    }

    #[test]
    fn cokernel_examples() {
        assert_eq!(cokernel(&IntMat::zeros(2, 0)), AbelianGroup::free(2));
        assert_eq!(cokernel(&IntMat::mat2(2, 0, 0, 3)), AbelianGroup::from_i64(0, &[6]));
        assert_eq!(cokernel(&IntMat::from_rows(&[[2], [0]])), AbelianGroup::from_i64(1, &[2]));
    }

    #[test]
    fn solve_examples() {
        let b = IntVec::from_i64s(&[3, 5]);
        assert_eq!(integer_solve(&IntMat::identity(2), &b).unwrap(), Some(b));
        let a = IntMat::from_rows(&[[2], [0]]);
        assert_eq!(
            integer_solve(&a, &IntVec::from_i64s(&[4, 0])).unwrap(),
            Some(IntVec::from_i64s(&[2]))
        );
        assert_eq!(integer_solve(&a, &IntVec::from_i64s(&[3, 0])).unwrap(), None);
        assert!(integer_solve(&a, &IntVec::from_i64s(&[3])).is_err());
    }

    #[test]
    fn completion_of_primitive_tuple() {
        let u = IntVec::from_i64s(&[3, 5, 7]);
        let b = complete_to_basis(&[u.clone()], 3).unwrap().unwrap();
        assert_eq!(b.column(0), u);
        assert!(det(&b).unwrap().abs().is_one());
        assert!(complete_to_basis(&[IntVec::from_i64s(&[2, 4])], 2).unwrap().is_none());
    }

    #[test]
    fn hermite_basis_is_canonical() {
        let h = hermite_basis(&[IntVec::from_i64s(&[-1, 1])], 2).unwrap();
        assert_eq!(h, vec![IntVec::from_i64s(&[1, -1])]);
        let h = hermite_basis(&[IntVec::from_i64s(&[2, 1]), IntVec::from_i64s(&[1, 1])], 2).unwrap();
        assert_eq!(h, vec![IntVec::from_i64s(&[1, 0]), IntVec::from_i64s(&[0, 1])]);
        assert!(hermite_basis(&[], 2).unwrap().is_empty());
    }

    #[test]
    fn abelian_group_normalises_orders() {
        let g = AbelianGroup::from_i64(1, &[2, 3, 1]);
        assert_eq!(g.torsion, vec![big(6)]);
        assert_eq!(g.to_string(), "Z + Z/6");
        let h = AbelianGroup::from_i64(0, &[2]).direct_sum(&AbelianGroup::from_i64(0, &[2]));
        assert_eq!(h.torsion, vec![big(2), big(2)]);
        assert_eq!(AbelianGroup::zero().to_string(), "0");
    }

    #[test]
    fn matrix_power() {
        let t = IntMat::mat2(1, 1, 0, 1);
        assert_eq!(t.pow(3).unwrap(), IntMat::mat2(1, 3, 0, 1));
        assert_eq!(t.pow(-2).unwrap(), IntMat::mat2(1, -2, 0, 1));
        assert_eq!(t.pow(0).unwrap(), IntMat::identity(2));
    }
}
