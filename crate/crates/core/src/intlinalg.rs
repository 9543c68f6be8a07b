//! Exact integer matrices: Hermite and Smith normal forms with
//! transformation certificates, kernel bases, solving over ℤ, and
//! lattice intersection.
//!
//! Pivots are chosen by minimal absolute value with immediate
//! reduction of the pivot row/column, which keeps entry growth tame
//! on the sparse matrices this crate produces. All transformations
//! are unimodular and returned, so every downstream claim can be
//! replayed by multiplying back.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> IntMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn from_columns(cols: Vec<Vec<BigInt>>) -> IntMatrix {
        let c = cols.len();
        let r = cols.first().map_or(0, |col| col.len());
        assert!(cols.iter().all(|col| col.len() == r), "ragged columns");
        let mut m = IntMatrix::zeros(r, c);
        for (j, col) in cols.into_iter().enumerate() {
            for (i, x) in col.into_iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let cell = &out[(i, j)] + a * b;
                        out[(i, j)] = cell;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| &self[(i, j)] * &v[j])
                    .fold(BigInt::zero(), |acc, x| acc + x)
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// col[b] += q * col[a]
    fn add_col(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let t = &self.data[i * self.cols + a] * q;
            if !t.is_zero() {
                self.data[i * self.cols + b] += t;
            }
        }
    }

    /// row[b] += q * row[a]
    fn add_row(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let t = &self.data[a * self.cols + j] * q;
            if !t.is_zero() {
                self.data[b * self.cols + j] += t;
            }
        }
    }

    fn negate_col(&mut self, a: usize) {
        for i in 0..self.rows {
            let x = std::mem::take(&mut self.data[i * self.cols + a]);
            self.data[i * self.cols + a] = -x;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let x = std::mem::take(&mut self.data[a * self.cols + j]);
            self.data[a * self.cols + j] = -x;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows.min(12) {
            let row: Vec<String> = (0..self.cols.min(20)).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Column-style Hermite normal form `M · V = H` with `V` unimodular:
/// `H` is in column echelon form with nonnegative pivots and reduced
/// entries to the right of each pivot.
pub struct ColumnHnf {
    pub h: IntMatrix,
    pub v: IntMatrix,
    /// (pivot row, pivot column) pairs, in order.
    pub pivots: Vec<(usize, usize)>,
}

pub fn column_hnf(m: &IntMatrix) -> ColumnHnf {
    let mut h = m.clone();
    let mut v = IntMatrix::identity(m.cols());
    let mut pivots = Vec::new();
    let mut col = 0usize;
    for row in 0..h.rows() {
        if col >= h.cols() {
            break;
        }
        // gcd-eliminate along this row among columns col..
        loop {
            // pick the column with minimal nonzero |entry| in this row
            let mut best: Option<(usize, BigInt)> = None;
            for j in col..h.cols() {
                let x = &h[(row, j)];
                if x.is_zero() {
                    continue;
                }
                if best.as_ref().is_none_or(|(_, b)| x.abs() < b.abs()) {
                    best = Some((j, x.clone()));
                }
            }
            let Some((jmin, pivot)) = best else { break };
            h.swap_cols(col, jmin);
            v.swap_cols(col, jmin);
            if pivot.is_negative() {
                h.negate_col(col);
                v.negate_col(col);
            }
            let pivot = h[(row, col)].clone();
            let mut done = true;
            for j in col + 1..h.cols() {
                if h[(row, j)].is_zero() {
                    continue;
                }
                let q = -h[(row, j)].div_floor(&pivot);
                h.add_col(col, j, &q);
                v.add_col(col, j, &q);
                if !h[(row, j)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if !h[(row, col)].is_zero() {
            // reduce earlier columns against this pivot
            let pivot = h[(row, col)].clone();
            for j in 0..col {
                let q = -h[(row, j)].div_floor(&pivot);
                h.add_col(col, j, &q);
                v.add_col(col, j, &q);
            }
            pivots.push((row, col));
            col += 1;
        }
    }
    ColumnHnf { h, v, pivots }
}

/// Row-style Hermite normal form `U · M = H` with `U` unimodular.
pub struct RowHnf {
    pub h: IntMatrix,
    pub u: IntMatrix,
    pub pivots: Vec<(usize, usize)>,
}

pub fn row_hnf(m: &IntMatrix) -> RowHnf {
    let t = column_hnf(&m.transpose());
    let pivots = t.pivots.iter().map(|&(r, c)| (c, r)).collect();
    RowHnf { h: t.h.transpose(), u: t.v.transpose(), pivots }
}

/// Smith normal form `U · M · V = S` with `S = diag(d₁, …, d_r)`,
/// `d_i ≥ 0` and `d₁ | d₂ | …`.
pub struct SnfResult {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.s.rows().min(self.s.cols());
        (0..n).map(|i| self.s[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }

    /// The nontrivial invariant factors (> 1 entries and zeros give
    /// the torsion/free structure of the cokernel).
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|d| !d.is_zero()).collect()
    }
}

pub fn snf(m: &IntMatrix) -> SnfResult {
    let rows = m.rows();
    let cols = m.cols();
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let n = rows.min(cols);

    for k in 0..n {
        loop {
            // locate minimal nonzero |entry| in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in k..rows {
                for j in k..cols {
                    if s[(i, j)].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| s[(i, j)].abs() < s[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return normalize_snf(u, s, v, k);
            };
            s.swap_rows(k, pi);
            u.swap_rows(k, pi);
            s.swap_cols(k, pj);
            v.swap_cols(k, pj);
            if s[(k, k)].is_negative() {
                s.negate_row(k);
                u.negate_row(k);
            }
            let pivot = s[(k, k)].clone();
            let mut clean = true;
            for i in k + 1..rows {
                if s[(i, k)].is_zero() {
                    continue;
                }
                let q = -s[(i, k)].div_floor(&pivot);
                s.add_row(k, i, &q);
                u.add_row(k, i, &q);
                if !s[(i, k)].is_zero() {
                    clean = false;
                }
            }
            for j in k + 1..cols {
                if s[(k, j)].is_zero() {
                    continue;
                }
                let q = -s[(k, j)].div_floor(&pivot);
                s.add_col(k, j, &q);
                v.add_col(k, j, &q);
                if !s[(k, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // pivot must divide the rest of the block; if not, fold
            // an offending row in and retry
            let mut offender = None;
            'scan: for i in k + 1..rows {
                for j in k + 1..cols {
                    if !s[(i, j)].is_multiple_of(&pivot) {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    s.add_row(i, k, &BigInt::one());
                    u.add_row(i, k, &BigInt::one());
                }
                None => break,
            }
        }
    }
    normalize_snf(u, s, v, n)
}

fn normalize_snf(u: IntMatrix, mut s: IntMatrix, v: IntMatrix, _done: usize) -> SnfResult {
    let n = s.rows().min(s.cols());
    for i in 0..n {
        if s[(i, i)].is_negative() {
            // cannot happen with the pivot normalization above, but
            // keep the invariant airtight
            let x = std::mem::take(&mut s[(i, i)]);
            s[(i, i)] = -x;
        }
    }
    SnfResult { u, s, v }
}

/// Basis of the integer kernel lattice `{x : Mx = 0}`; the vectors
/// span all integral solutions.
pub fn kernel_basis(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let hnf = column_hnf(m);
    let rank = hnf.pivots.len();
    (rank..m.cols()).map(|j| hnf.v.column(j)).collect()
}

pub fn rank(m: &IntMatrix) -> usize {
    column_hnf(m).pivots.len()
}

/// A particular integral solution of `Mx = b`, if one exists.
pub fn solve(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(m.rows(), b.len(), "rhs length mismatch");
    let hnf = column_hnf(m);
    let mut residual: Vec<BigInt> = b.to_vec();
    let mut y = vec![BigInt::zero(); m.cols()];
    for &(row, col) in &hnf.pivots {
        // rows above each pivot row are already zero in columns ≥ col
        let pivot = &hnf.h[(row, col)];
        let (q, r) = residual[row].div_rem(pivot);
        if !r.is_zero() {
            return None;
        }
        for i in 0..m.rows() {
            let t = &hnf.h[(i, col)] * &q;
            residual[i] -= t;
        }
        y[col] = q;
    }
    if residual.iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some(hnf.v.mul_vec(&y))
}

/// Basis of `colspan(A) ∩ colspan(B)`, via the kernel of `[A | -B]`.
pub fn lattice_intersect(a: &IntMatrix, b: &IntMatrix) -> Result<Vec<Vec<BigInt>>, MatrixError> {
    if a.rows() != b.rows() {
        return Err(MatrixError::Dimension(format!(
            "ambient ranks differ: {} vs {}",
            a.rows(),
            b.rows()
        )));
    }
    let mut stacked = IntMatrix::zeros(a.rows(), a.cols() + b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            stacked[(i, j)] = a[(i, j)].clone();
        }
        for j in 0..b.cols() {
            stacked[(i, a.cols() + j)] = -b[(i, j)].clone();
        }
    }
    let kernel = kernel_basis(&stacked);
    let mut gens: Vec<Vec<BigInt>> = Vec::new();
    for k in &kernel {
        let x = &k[..a.cols()];
        let img = a.mul_vec(x);
        if img.iter().any(|c| !c.is_zero()) {
            gens.push(img);
        }
    }
    if gens.is_empty() {
        return Ok(Vec::new());
    }
    // canonical basis of the intersection lattice
    let gen_matrix = IntMatrix::from_columns(gens);
    let hnf = column_hnf(&gen_matrix);
    Ok(hnf
        .pivots
        .iter()
        .map(|&(_, c)| hnf.h.column(c))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    #[test]
    fn snf_examples() {
        let r = snf(&m(&[&[2, 0], &[0, 3]]));
        assert_eq!(r.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
        assert_eq!(r.u.mul(&m(&[&[2, 0], &[0, 3]])).mul(&r.v), r.s);

        let z = snf(&IntMatrix::zeros(3, 2));
        assert!(z.s.is_zero());
        assert_eq!(z.rank(), 0);
    }

    #[test]
    fn snf_divisibility_chain() {
        let cases = [
            m(&[&[4, 6], &[6, 4]]),
            m(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]),
            m(&[&[0, 0, 5], &[0, 7, 0], &[3, 0, 0]]),
        ];
        for c in cases {
            let r = snf(&c);
            assert_eq!(r.u.mul(&c).mul(&r.v), r.s);
            let d = r.diagonal();
            for w in d.windows(2) {
                if !w[1].is_zero() {
                    assert!(w[1].is_multiple_of(&w[0]), "chain broken: {d:?}");
                }
            }
            // off-diagonal zero
            for i in 0..r.s.rows() {
                for j in 0..r.s.cols() {
                    if i != j {
                        assert!(r.s[(i, j)].is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn hnf_roundtrip() {
        let a = m(&[&[3, 1, -4], &[2, -3, 1]]);
        let h = column_hnf(&a);
        assert_eq!(a.mul(&h.v), h.h);
        let rh = row_hnf(&a);
        assert_eq!(rh.u.mul(&a), rh.h);
    }

    #[test]
    fn kernel_and_solve() {
        assert_eq!(solve(&m(&[&[2]]), &[BigInt::from(3)]), None);
        assert_eq!(
            solve(&m(&[&[2]]), &[BigInt::from(6)]),
            Some(vec![BigInt::from(3)])
        );

        let k = kernel_basis(&m(&[&[1, -1]]));
        assert_eq!(k.len(), 1);
        assert_eq!(k[0][0], k[0][1]);
        assert_eq!(k[0][0].abs(), BigInt::one());

        let a = m(&[&[1, 2, 3], &[4, 5, 6]]);
        for v in kernel_basis(&a) {
            assert!(a.mul_vec(&v).iter().all(|x| x.is_zero()));
        }
        assert_eq!(kernel_basis(&a).len(), 1);

        let b = vec![BigInt::from(6), BigInt::from(15)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
    }

    #[test]
    fn lattice_intersection() {
        // colspan{(2,0),(0,1)} ∩ colspan{(3,0)} = 6ℤ × 0
        let a = m(&[&[2, 0], &[0, 1]]);
        let b = m(&[&[3], &[0]]);
        let inter = lattice_intersect(&a, &b).unwrap();
        assert_eq!(inter.len(), 1);
        assert_eq!(inter[0][0].abs(), BigInt::from(6));
        assert!(inter[0][1].is_zero());

        // disjoint lines intersect trivially
        let a = m(&[&[1], &[0]]);
        let b = m(&[&[0], &[1]]);
        assert!(lattice_intersect(&a, &b).unwrap().is_empty());
    }

    #[test]
    fn invariant_factors_stable_under_permutation() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        let mut p = a.clone();
        p.swap_rows(0, 2);
        p.swap_cols(1, 2);
        assert_eq!(snf(&a).diagonal(), snf(&p).diagonal());
    }
}
