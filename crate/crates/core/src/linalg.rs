//! Exact dense linear algebra over a cyclotomic-rational field.
//!
//! Vectors are coordinate rows `Vec<Scalar>`; operators act on them as
//! matrices via [`Matrix::apply`]. Subspaces are kept in reduced row echelon
//! form with zero rows dropped, so two subspaces are equal exactly when their
//! stored bases are equal and every span has one canonical representation.

use crate::field::{FieldSpec, Scalar};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};
use std::collections::BTreeSet;
use std::fmt;

pub fn vec_zero(spec: FieldSpec, n: usize) -> Vec<Scalar> {
    vec![spec.zero(); n]
}

pub fn vec_is_zero(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn vec_add(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

pub fn vec_sub(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

pub fn vec_scale(c: &Scalar, v: &[Scalar]) -> Vec<Scalar> {
    v.iter().map(|x| c.mul(x)).collect()
}

pub fn vec_add_assign(acc: &mut [Scalar], v: &[Scalar]) {
    debug_assert_eq!(acc.len(), v.len());
    for (a, b) in acc.iter_mut().zip(v) {
        *a = a.add(b);
    }
}

pub fn vec_add_scaled(acc: &mut [Scalar], c: &Scalar, v: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (a, b) in acc.iter_mut().zip(v) {
        *a = a.add(&c.mul(b));
    }
}

/// Standard basis vector e_i of length n.
pub fn unit_vector(spec: FieldSpec, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec_zero(spec, n);
    v[i] = spec.one();
    v
}

/// Dense row-major matrix over one field.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matrix {
    spec: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(spec: FieldSpec, rows: usize, cols: usize) -> Matrix {
        Matrix {
            spec,
            rows,
            cols,
            data: vec![spec.zero(); rows * cols],
        }
    }

    pub fn identity(spec: FieldSpec, n: usize) -> Matrix {
        let mut m = Matrix::zero(spec, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = spec.one();
        }
        m
    }

    pub fn from_rows(spec: FieldSpec, cols: usize, rows: Vec<Vec<Scalar>>) -> Matrix {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r);
        }
        Matrix {
            spec,
            rows: nrows,
            cols,
            data,
        }
    }

    pub fn from_columns(spec: FieldSpec, rows: usize, columns: Vec<Vec<Scalar>>) -> Matrix {
        let cols = columns.len();
        let mut m = Matrix::zero(spec, rows, cols);
        for (j, col) in columns.into_iter().enumerate() {
            assert_eq!(col.len(), rows, "ragged columns");
            for (i, v) in col.into_iter().enumerate() {
                *m.at_mut(i, j) = v;
            }
        }
        m
    }

    /// Builds from integer entries; handy in tests and fixtures.
    pub fn from_i64(spec: FieldSpec, rows: Vec<Vec<i64>>) -> Matrix {
        let cols = rows.first().map(|r| r.len()).unwrap_or(0);
        Matrix::from_rows(
            spec,
            cols,
            rows.into_iter()
                .map(|r| r.into_iter().map(|k| spec.integer(k)).collect())
                .collect(),
        )
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<Scalar> {
        self.row(i).to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Scalar]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// Row-major flattening; used to treat operators as vectors.
    pub fn flatten(&self) -> Vec<Scalar> {
        self.data.clone()
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zero(self.spec, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *m.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        m
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            spec: self.spec,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            spec: self.spec,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(&self.spec.integer(-1))
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            spec: self.spec,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| c.mul(a)).collect(),
        }
    }

    pub fn matmul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = Matrix::zero(self.spec, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.at(k, j);
                    if !b.is_zero() {
                        let cur = out.at(i, j).add(&a.mul(b));
                        *out.at_mut(i, j) = cur;
                    }
                }
            }
        }
        out
    }

    /// Applies the operator to a coordinate vector: (M v)_i = sum_j M[i][j] v_j.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in apply");
        let mut out = vec_zero(self.spec, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.at(i, j);
                if !a.is_zero() && !v[j].is_zero() {
                    out[i] = out[i].add(&a.mul(&v[j]));
                }
            }
        }
        out
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            spec: self.spec,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn trace(&self) -> Scalar {
        assert_eq!(self.rows, self.cols);
        let mut t = self.spec.zero();
        for i in 0..self.rows {
            t = t.add(self.at(i, i));
        }
        t
    }

    /// Reduced row echelon form with exact pivots. Returns the reduced matrix
    /// and the pivot column indices in increasing order. Pivot choice is the
    /// first nonzero entry in each column, so the result is deterministic.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let (r, p, _) = self.rref_with_transform(false);
        (r, p)
    }

    /// As `rref`, optionally tracking a transform T with T * self = rref.
    pub fn rref_with_transform(&self, track: bool) -> (Matrix, Vec<usize>, Option<Matrix>) {
        let mut m = self.clone();
        let mut t = if track {
            Some(Matrix::identity(self.spec, self.rows))
        } else {
            None
        };
        let mut pivots = Vec::new();
        let mut lead = 0usize;
        for col in 0..m.cols {
            if lead >= m.rows {
                break;
            }
            let Some(piv) = (lead..m.rows).find(|&r| !m.at(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(lead, piv);
            if let Some(t) = t.as_mut() {
                t.swap_rows(lead, piv);
            }
            let inv = m.at(lead, col).inv().expect("pivot is nonzero");
            m.scale_row(lead, &inv);
            if let Some(t) = t.as_mut() {
                t.scale_row(lead, &inv);
            }
            for r in 0..m.rows {
                if r != lead && !m.at(r, col).is_zero() {
                    let factor = m.at(r, col).clone();
                    m.sub_scaled_row(r, lead, &factor);
                    if let Some(t) = t.as_mut() {
                        t.sub_scaled_row(r, lead, &factor);
                    }
                }
            }
            pivots.push(col);
            lead += 1;
        }
        (m, pivots, t)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, c: &Scalar) {
        for j in 0..self.cols {
            let v = self.at(r, j).mul(c);
            *self.at_mut(r, j) = v;
        }
    }

    fn sub_scaled_row(&mut self, target: usize, source: usize, c: &Scalar) {
        for j in 0..self.cols {
            let v = self.at(target, j).sub(&c.mul(self.at(source, j)));
            *self.at_mut(target, j) = v;
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Null space {v : M v = 0} as a canonical subspace of the column domain.
    pub fn kernel(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let pivot_set: BTreeSet<usize> = pivots.iter().copied().collect();
        let mut rows = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec_zero(self.spec, self.cols);
            v[free] = self.spec.one();
            for (ri, &p) in pivots.iter().enumerate() {
                v[p] = r.at(ri, free).neg();
            }
            rows.push(v);
        }
        let ker = Subspace::from_rows(self.spec, self.cols, rows);
        assert_eq!(
            pivots.len() + ker.dim(),
            self.cols,
            "rank-nullity violated; exact elimination is broken"
        );
        ker
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let (_, pivots, t) = self.rref_with_transform(true);
        if pivots.len() == self.rows {
            t
        } else {
            None
        }
    }

    /// Solves x * self = target for a coordinate row x, if target lies in the
    /// row space.
    pub fn solve_left(&self, target: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(target.len(), self.cols);
        let (r, pivots, t) = self.rref_with_transform(true);
        let t = t.expect("transform requested");
        let mut residual = target.to_vec();
        let mut coeffs = vec_zero(self.spec, r.rows);
        for (ri, &p) in pivots.iter().enumerate() {
            if residual[p].is_zero() {
                continue;
            }
            let c = residual[p].clone();
            for j in 0..self.cols {
                residual[j] = residual[j].sub(&c.mul(r.at(ri, j)));
            }
            coeffs[ri] = c;
        }
        if !vec_is_zero(&residual) {
            return None;
        }
        // x = coeffs * T since T * self = rref
        let mut x = vec_zero(self.spec, self.rows);
        for (ri, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for j in 0..self.rows {
                x[j] = x[j].add(&c.mul(t.at(ri, j)));
            }
        }
        Some(x)
    }

    /// Coefficients of det(xI - M), little-endian, computed by the
    /// Faddeev-LeVerrier recurrence (exact: only divides by integers).
    pub fn char_poly(&self) -> Vec<Scalar> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let spec = self.spec;
        let mut coeffs = vec![spec.zero(); n + 1];
        coeffs[n] = spec.one();
        let mut mk = Matrix::zero(spec, n, n);
        let mut ck = spec.one();
        for k in 1..=n {
            // M_k = A (M_{k-1} + c_{k-1} I); c_k = -tr(M_k)/k
            let mut shifted = mk.clone();
            for i in 0..n {
                let v = shifted.at(i, i).add(&ck);
                *shifted.at_mut(i, i) = v;
            }
            mk = self.matmul(&shifted);
            ck = mk
                .trace()
                .neg()
                .div(&spec.integer(k as i64))
                .expect("k is a nonzero integer");
            coeffs[n - k] = ck.clone();
        }
        coeffs
    }

    pub fn eigenspace(&self, lambda: &Scalar) -> Subspace {
        assert_eq!(self.rows, self.cols);
        let shifted = self.sub(&Matrix::identity(self.spec, self.rows).scale(lambda));
        shifted.kernel()
    }

    /// Eigenvalues of the operator that lie in the working field. Candidates
    /// are the caller's hints plus, when the characteristic polynomial has
    /// rational coefficients, its rational roots; each candidate is kept only
    /// if its eigenspace is nonzero. Over Q this finds every eigenvalue in
    /// the field; over larger fields irrational eigenvalues are only found
    /// when hinted, and any miss surfaces later as a splitness defect.
    pub fn field_eigenvalues(&self, hints: &[Scalar]) -> Vec<Scalar> {
        let spec = self.spec;
        let mut candidates: BTreeSet<Scalar> = hints.iter().cloned().collect();
        let char_poly = self.char_poly();
        let rational: Option<Vec<BigRational>> = char_poly
            .iter()
            .map(|c| c.rational_part().cloned())
            .collect();
        if let Some(p) = rational {
            for root in rational_roots(&p) {
                candidates.insert(spec.rational(root));
            }
        }
        candidates
            .into_iter()
            .filter(|lambda| self.eigenspace(lambda).dim() > 0)
            .collect()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|s| s.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Rational roots of a rational-coefficient polynomial (little-endian), via
/// the rational root theorem after clearing denominators. Divisor search uses
/// trial division; a coefficient with a huge prime factor beyond the search
/// bound can hide a root, which downstream code reports as a splitness
/// defect instead of an eigenvalue.
pub fn rational_roots(poly: &[BigRational]) -> Vec<BigRational> {
    let mut p: Vec<BigRational> = poly.to_vec();
    while p.len() > 1 && p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
    if p.len() <= 1 {
        return Vec::new();
    }
    let mut roots = BTreeSet::new();
    let mut low = 0usize;
    while low < p.len() && p[low].is_zero() {
        low += 1;
    }
    if low > 0 {
        roots.insert(BigRational::zero());
        p.drain(..low);
    }
    if p.len() <= 1 {
        return roots.into_iter().collect();
    }
    // clear denominators: multiply by the lcm of all denominators
    let mut lcm = BigInt::one();
    for c in &p {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = p
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let a0 = ints.first().expect("nonzero constant term").abs();
    let an = ints.last().expect("nonzero leading term").abs();
    let eval = |x: &BigRational| -> bool {
        let mut acc = BigRational::zero();
        for c in ints.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc.is_zero()
    };
    for num in divisors(&a0) {
        for den in divisors(&an) {
            let candidate = BigRational::new(num.clone(), den.clone());
            for c in [candidate.clone(), -candidate] {
                if eval(&c) {
                    roots.insert(c);
                }
            }
        }
    }
    roots.into_iter().collect()
}

/// Positive divisors via trial division. The search bound caps the smallest
/// prime factor we can discover; see `rational_roots` for the consequence.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    const TRIAL_BOUND: u64 = 1 << 20;
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut m = n.abs();
    if m.is_zero() {
        return vec![BigInt::one()];
    }
    let mut d: u64 = 2;
    while BigInt::from(d) * BigInt::from(d) <= m && d <= TRIAL_BOUND {
        let big_d = BigInt::from(d);
        let mut mult = 0;
        while (&m % &big_d).is_zero() {
            m /= &big_d;
            mult += 1;
        }
        if mult > 0 {
            factors.push((big_d, mult));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > BigInt::one() {
        factors.push((m, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, mult) in factors {
        let prior = divs.clone();
        let mut power = BigInt::one();
        for _ in 0..mult {
            power = &power * &p;
            for d in &prior {
                divs.push(d * &power);
            }
        }
    }
    divs.sort();
    divs.dedup();
    divs
}

/// A linear subspace held as a canonical RREF basis, so equality of spans is
/// literal equality of the struct.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
}

impl Subspace {
    pub fn zero(spec: FieldSpec, ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Matrix::zero(spec, 0, ambient),
        }
    }

    pub fn full(spec: FieldSpec, ambient: usize) -> Subspace {
        Subspace::from_rows(
            spec,
            ambient,
            (0..ambient).map(|i| unit_vector(spec, ambient, i)).collect(),
        )
    }

    pub fn from_rows(spec: FieldSpec, ambient: usize, rows: Vec<Vec<Scalar>>) -> Subspace {
        let m = Matrix::from_rows(spec, ambient, rows);
        Subspace::from_matrix_rows(&m)
    }

    pub fn from_matrix_rows(m: &Matrix) -> Subspace {
        let (r, pivots) = m.rref();
        let rows: Vec<Vec<Scalar>> = (0..pivots.len()).map(|i| r.row_vec(i)).collect();
        Subspace {
            ambient: m.cols(),
            basis: Matrix::from_rows(m.spec(), m.cols(), rows),
        }
    }

    pub fn spec(&self) -> FieldSpec {
        self.basis.spec()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_rows(&self) -> impl Iterator<Item = &[Scalar]> {
        self.basis.row_iter()
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        Subspace::from_matrix_rows(&self.basis.vstack(&other.basis))
    }

    /// Intersection via the left kernel of the stacked bases: a relation
    /// x*A = y*B between combinations of the two bases names a common vector.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let spec = self.spec();
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::zero(spec, self.ambient);
        }
        let stacked = self.basis.vstack(&other.basis);
        let left_kernel = stacked.transpose().kernel();
        let mut rows = Vec::new();
        for z in left_kernel.basis_rows() {
            let mut v = vec_zero(spec, self.ambient);
            for (i, c) in z.iter().take(self.dim()).enumerate() {
                vec_add_scaled(&mut v, c, self.basis.row(i));
            }
            rows.push(v);
        }
        Subspace::from_rows(spec, self.ambient, rows)
    }

    /// Reduces a vector against the basis; the residual is zero exactly when
    /// the vector lies in the subspace.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.ambient);
        let mut residual = v.to_vec();
        for (row, pivot) in self.basis_rows().zip(self.pivot_columns()) {
            if residual[pivot].is_zero() {
                continue;
            }
            let c = residual[pivot].clone();
            for (res, b) in residual.iter_mut().zip(row) {
                *res = res.sub(&c.mul(b));
            }
        }
        residual
    }

    pub fn contains_vector(&self, v: &[Scalar]) -> bool {
        vec_is_zero(&self.reduce(v))
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        other.basis_rows().all(|r| self.contains_vector(r))
    }

    /// Coordinates of v in the stored RREF basis, if v lies in the span.
    pub fn coordinates_of(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let mut residual = v.to_vec();
        let mut coords = Vec::with_capacity(self.dim());
        for (row, pivot) in self.basis_rows().zip(self.pivot_columns()) {
            let c = residual[pivot].clone();
            coords.push(c.clone());
            if !c.is_zero() {
                for (res, b) in residual.iter_mut().zip(row) {
                    *res = res.sub(&c.mul(b));
                }
            }
        }
        if vec_is_zero(&residual) {
            Some(coords)
        } else {
            None
        }
    }

    /// Pivot column of each basis row (the RREF structure makes this the
    /// position of the leading one).
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.basis_rows()
            .map(|r| {
                r.iter()
                    .position(|c| !c.is_zero())
                    .expect("basis rows are nonzero")
            })
            .collect()
    }

    /// Image under an operator (columns convention), as a subspace.
    pub fn image_under(&self, m: &Matrix) -> Subspace {
        let rows: Vec<Vec<Scalar>> = self.basis_rows().map(|r| m.apply(r)).collect();
        Subspace::from_rows(self.spec(), m.rows(), rows)
    }

    /// Matrix of an operator restricted to this subspace, in the stored
    /// basis. None if the operator does not preserve the subspace.
    pub fn restrict_operator(&self, m: &Matrix) -> Option<Matrix> {
        let spec = self.spec();
        let mut columns = Vec::with_capacity(self.dim());
        for r in self.basis_rows() {
            let image = m.apply(r);
            columns.push(self.coordinates_of(&image)?);
        }
        Some(Matrix::from_columns(spec, self.dim(), columns))
    }

    /// Lifts coordinates in the stored basis back to ambient coordinates.
    pub fn lift(&self, coords: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(coords.len(), self.dim());
        let mut v = vec_zero(self.spec(), self.ambient);
        for (c, row) in coords.iter().zip(self.basis_rows()) {
            vec_add_scaled(&mut v, c, row);
        }
        v
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} of {}) {:?}", self.dim(), self.ambient, self.basis)
    }
}

/// Greedy canonical complement of `inner` inside `outer`: walk the RREF basis
/// of `outer` and keep each row that is independent of `inner` plus the rows
/// already kept. Requires inner to be contained in outer.
pub fn canonical_complement(outer: &Subspace, inner: &Subspace) -> Subspace {
    assert!(outer.contains(inner), "complement of a non-subspace");
    let mut acc = inner.clone();
    let mut kept: Vec<Vec<Scalar>> = Vec::new();
    for row in outer.basis_rows() {
        if !acc.contains_vector(row) {
            kept.push(row.to_vec());
            acc = acc.sum(&Subspace::from_rows(
                outer.spec(),
                outer.ambient(),
                vec![row.to_vec()],
            ));
        }
    }
    Subspace::from_rows(outer.spec(), outer.ambient(), kept)
}
