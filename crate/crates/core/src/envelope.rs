//! The operator algebra and the standard two-graded envelope.
//!
//! For a graded 3-algebra T this module builds the span of the left
//! multiplication operators ad(x,y): z -> [x,y,z], equips it with a Lie color
//! bracket (a twisted one in the hom flavors), and assembles the enveloping
//! two-graded algebra whose even part is the operator span and whose odd part
//! is T itself. Every structural claim is re-derived numerically as a
//! certificate rather than assumed.

use crate::algebra::{Flavor, GradedAlgebra};
use crate::field::{FieldSpec, Scalar};
use crate::grading::{Bicharacter, GradingGroup, GroupElement};
use crate::linalg::{unit_vector, vec_is_zero, vec_zero, Matrix, Subspace};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnvelopeError {
    #[error("phi must be invertible to build the operator algebra")]
    SingularPhi,
    #[error("operator {op} conjugated by phi leaves the operator span")]
    NotClosedUnderPhi { op: usize },
    #[error("structure entry ({i},{j}) yields an operator that mixes degrees")]
    NotGraded { i: usize, j: usize },
    #[error(
        "bracket of basis operators {p} and {q} disagrees with the derived product formula; \
         the defining identity likely fails upstream"
    )]
    ClosureFailure { p: usize, q: usize },
    #[error("operation needs flavor {expected}, algebra has {found}")]
    WrongFlavor { expected: String, found: String },
    #[error("the source algebra fails its defining identity")]
    IdentityFailure,
    #[error("embedding isomorphism broke at {detail}")]
    IsomorphismFailure { detail: String },
}

/// The span of the multiplication operators of T, as a Lie color algebra
/// carrying the conjugation automorphism l -> phi l phi^{-1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultAlgebra {
    field: FieldSpec,
    group: GradingGroup,
    eps: Bicharacter,
    parent_dim: usize,
    /// twisted bracket (hom flavors) vs plain commutator
    hom: bool,
    phi: Matrix,
    phi_inv: Matrix,
    ops: Vec<Matrix>,
    op_pairs: Vec<(usize, usize)>,
    op_degrees: Vec<GroupElement>,
    /// rows = vectorized basis operators, for coordinate solves
    ops_stack: Matrix,
    /// bracket_tensor[p][q] = coordinates of [op_p, op_q]
    bracket_tensor: Vec<Vec<Vec<Scalar>>>,
    /// conjugation by phi, column p = coordinates of phi op_p phi^{-1}
    phi_op: Matrix,
}

impl MultAlgebra {
    pub fn dim(&self) -> usize {
        self.ops.len()
    }

    pub fn parent_dim(&self) -> usize {
        self.parent_dim
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ops(&self) -> &[Matrix] {
        &self.ops
    }

    pub fn op(&self, p: usize) -> &Matrix {
        &self.ops[p]
    }

    pub fn op_pairs(&self) -> &[(usize, usize)] {
        &self.op_pairs
    }

    pub fn op_degrees(&self) -> &[GroupElement] {
        &self.op_degrees
    }

    pub fn phi_op(&self) -> &Matrix {
        &self.phi_op
    }

    pub fn bracket_tensor(&self) -> &[Vec<Vec<Scalar>>] {
        &self.bracket_tensor
    }

    pub fn op_label(&self, p: usize, basis_names: &[String]) -> String {
        let (i, j) = self.op_pairs[p];
        format!("ad({},{})", basis_names[i], basis_names[j])
    }

    /// Coordinates of an arbitrary operator in the op basis, if it lies in
    /// the span.
    pub fn coords_of(&self, m: &Matrix) -> Option<Vec<Scalar>> {
        let v = m.flatten();
        if self.ops.is_empty() {
            return if vec_is_zero(&v) { Some(Vec::new()) } else { None };
        }
        self.ops_stack.solve_left(&v)
    }

    pub fn op_from_coords(&self, coords: &[Scalar]) -> Matrix {
        assert_eq!(coords.len(), self.ops.len());
        let mut m = Matrix::zero(self.field, self.parent_dim, self.parent_dim);
        for (p, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                m = m.add(&self.ops[p].scale(c));
            }
        }
        m
    }

    /// Bracket of two operators given as matrices with known degrees:
    /// the commutator, with phi^{-1} spliced between factors in hom flavors.
    pub fn bracket_matrices(
        &self,
        a: &Matrix,
        da: &GroupElement,
        b: &Matrix,
        db: &GroupElement,
    ) -> Matrix {
        let sign = self.eps.eval(da, db);
        if self.hom {
            let left = a.matmul(&self.phi_inv).matmul(b);
            let right = b.matmul(&self.phi_inv).matmul(a);
            left.sub(&right.scale(&sign))
        } else {
            a.matmul(b).sub(&b.matmul(a).scale(&sign))
        }
    }

    /// Bracket in op coordinates via the stored tensor.
    pub fn bracket_coords(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let m = self.ops.len();
        let mut out = vec_zero(self.field, m);
        for (p, xp) in x.iter().enumerate() {
            if xp.is_zero() {
                continue;
            }
            for (q, yq) in y.iter().enumerate() {
                if yq.is_zero() {
                    continue;
                }
                let c = xp.mul(yq);
                for (r, t) in self.bracket_tensor[p][q].iter().enumerate() {
                    if !t.is_zero() {
                        out[r] = out[r].add(&c.mul(t));
                    }
                }
            }
        }
        out
    }

    /// Matrix of l -> [h, l] on the op coordinate space.
    pub fn ad_even_matrix(&self, h: &[Scalar]) -> Matrix {
        let m = self.ops.len();
        let mut out = Matrix::zero(self.field, m, m);
        for p in 0..m {
            let col = self.bracket_coords(h, &unit_vector(self.field, m, p));
            for (r, c) in col.into_iter().enumerate() {
                *out.at_mut(r, p) = c;
            }
        }
        out
    }

    /// Degree of a coordinate vector when homogeneous (zero gets None).
    pub fn degree_of_coords(&self, coords: &[Scalar]) -> Option<GroupElement> {
        let mut deg: Option<GroupElement> = None;
        for (p, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match &deg {
                None => deg = Some(self.op_degrees[p].clone()),
                Some(d) if *d == self.op_degrees[p] => {}
                Some(_) => return None,
            }
        }
        deg
    }

    /// The grade-zero part of the operator algebra in op coordinates.
    pub fn grade_zero(&self) -> Subspace {
        let m = self.ops.len();
        let zero = self.group.zero();
        let rows: Vec<Vec<Scalar>> = (0..m)
            .filter(|&p| self.op_degrees[p] == zero)
            .map(|p| unit_vector(self.field, m, p))
            .collect();
        Subspace::from_rows(self.field, m, rows)
    }

    /// First violation of color antisymmetry or the color Jacobi identity
    /// over basis operators, if any. Both laws are theorems here; the check
    /// is a certificate.
    pub fn color_law_violation(&self) -> Option<String> {
        let m = self.ops.len();
        for p in 0..m {
            for q in 0..m {
                let sign = self.eps.eval(&self.op_degrees[p], &self.op_degrees[q]);
                let mut lhs = self.bracket_tensor[p][q].clone();
                let rhs = &self.bracket_tensor[q][p];
                for (r, c) in lhs.iter_mut().enumerate() {
                    *c = c.add(&sign.mul(&rhs[r]));
                }
                if !vec_is_zero(&lhs) {
                    return Some(format!("antisymmetry at ops ({p},{q})"));
                }
            }
        }
        for p in 0..m {
            for q in 0..m {
                for r in 0..m {
                    let up = unit_vector(self.field, m, p);
                    let uq = unit_vector(self.field, m, q);
                    let ur = unit_vector(self.field, m, r);
                    let mut sum = vec_zero(self.field, m);
                    let terms = [
                        (
                            self.eps.eval(&self.op_degrees[r], &self.op_degrees[p]),
                            self.bracket_coords(&self.bracket_coords(&up, &uq), &ur),
                        ),
                        (
                            self.eps.eval(&self.op_degrees[p], &self.op_degrees[q]),
                            self.bracket_coords(&self.bracket_coords(&uq, &ur), &up),
                        ),
                        (
                            self.eps.eval(&self.op_degrees[q], &self.op_degrees[r]),
                            self.bracket_coords(&self.bracket_coords(&ur, &up), &uq),
                        ),
                    ];
                    for (sign, term) in &terms {
                        for (s, c) in term.iter().enumerate() {
                            sum[s] = sum[s].add(&sign.mul(c));
                        }
                    }
                    if !vec_is_zero(&sum) {
                        return Some(format!("color Jacobi at ops ({p},{q},{r})"));
                    }
                }
            }
        }
        None
    }

    /// Conjugation by phi preserves the bracket tensor exactly.
    pub fn phi_preserves_bracket(&self) -> bool {
        let m = self.ops.len();
        for p in 0..m {
            for q in 0..m {
                let lhs = self.phi_op.apply(&self.bracket_tensor[p][q]);
                let rhs =
                    self.bracket_coords(&self.phi_op.column(p), &self.phi_op.column(q));
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }
}

/// The standard embedding: even part = operator algebra, odd part = T, with
/// the four product components stored as tensors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Envelope {
    mult: MultAlgebra,
    odd_degrees: Vec<GroupElement>,
    /// even_odd[p] = matrix of w -> op_p . w on T (the working action,
    /// with phi^{-1} applied after the raw operator in hom flavors)
    even_odd: Vec<Matrix>,
    /// odd_even[p] = matrix of z -> z . op_p (columns carry the color sign)
    odd_even: Vec<Matrix>,
    /// odd_odd[i][j] = op coordinates of e_i . e_j = ad(e_i, e_j)
    odd_odd: Vec<Vec<Vec<Scalar>>>,
}

/// An element of the envelope: even coordinates over the op basis plus odd
/// coordinates over the basis of T.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvElem {
    pub even: Vec<Scalar>,
    pub odd: Vec<Scalar>,
}

impl Envelope {
    pub fn mult(&self) -> &MultAlgebra {
        &self.mult
    }

    pub fn even_dim(&self) -> usize {
        self.mult.dim()
    }

    pub fn odd_dim(&self) -> usize {
        self.mult.parent_dim
    }

    pub fn even_odd_action(&self, p: usize) -> &Matrix {
        &self.even_odd[p]
    }

    pub fn odd_even_action(&self, p: usize) -> &Matrix {
        &self.odd_even[p]
    }

    pub fn odd_odd_coords(&self, i: usize, j: usize) -> &[Scalar] {
        &self.odd_odd[i][j]
    }

    /// Matrix of v -> l . v for l given in op coordinates.
    pub fn even_action_matrix(&self, l: &[Scalar]) -> Matrix {
        let n = self.odd_dim();
        let mut m = Matrix::zero(self.mult.field, n, n);
        for (p, c) in l.iter().enumerate() {
            if !c.is_zero() {
                m = m.add(&self.even_odd[p].scale(c));
            }
        }
        m
    }

    pub fn zero_elem(&self) -> EnvElem {
        EnvElem {
            even: vec_zero(self.mult.field, self.even_dim()),
            odd: vec_zero(self.mult.field, self.odd_dim()),
        }
    }

    /// The full two-graded product.
    pub fn product(&self, u: &EnvElem, v: &EnvElem) -> EnvElem {
        let spec = self.mult.field;
        let mut even = self.mult.bracket_coords(&u.even, &v.even);
        for (i, a) in u.odd.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in v.odd.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let c = a.mul(b);
                for (r, t) in self.odd_odd[i][j].iter().enumerate() {
                    if !t.is_zero() {
                        even[r] = even[r].add(&c.mul(t));
                    }
                }
            }
        }
        let mut odd = vec_zero(spec, self.odd_dim());
        for (p, c) in u.even.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let act = self.even_odd[p].apply(&v.odd);
            for (r, a) in act.into_iter().enumerate() {
                odd[r] = odd[r].add(&c.mul(&a));
            }
        }
        for (p, c) in v.even.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let act = self.odd_even[p].apply(&u.odd);
            for (r, a) in act.into_iter().enumerate() {
                odd[r] = odd[r].add(&c.mul(&a));
            }
        }
        EnvElem { even, odd }
    }

    fn basis_elem(&self, idx: usize) -> (EnvElem, GroupElement) {
        let m = self.even_dim();
        let mut e = self.zero_elem();
        let deg = if idx < m {
            e.even[idx] = self.mult.field.one();
            self.mult.op_degrees[idx].clone()
        } else {
            e.odd[idx - m] = self.mult.field.one();
            self.odd_degrees[idx - m].clone()
        };
        (e, deg)
    }

    /// The global conjugation-and-phi automorphism applied to an element.
    pub fn apply_big_phi(&self, u: &EnvElem) -> EnvElem {
        EnvElem {
            even: self.mult.phi_op.apply(&u.even),
            odd: self.mult.phi.apply(&u.odd),
        }
    }

    /// Certifies that the global automorphism is multiplicative on all basis
    /// pairs of both parities.
    pub fn phi_is_multiplicative(&self) -> bool {
        let total = self.even_dim() + self.odd_dim();
        for a in 0..total {
            for b in 0..total {
                let (ea, _) = self.basis_elem(a);
                let (eb, _) = self.basis_elem(b);
                let lhs = self.apply_big_phi(&self.product(&ea, &eb));
                let rhs = self.product(&self.apply_big_phi(&ea), &self.apply_big_phi(&eb));
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// Diagnostic: does the whole envelope satisfy the color antisymmetry and
    /// color Jacobi laws? True for Lie-triple-flavored sources; not in
    /// general.
    pub fn color_law_violation(&self) -> Option<String> {
        let total = self.even_dim() + self.odd_dim();
        for a in 0..total {
            for b in 0..total {
                let (ea, da) = self.basis_elem(a);
                let (eb, db) = self.basis_elem(b);
                let sign = self.mult.eps.eval(&da, &db);
                let p1 = self.product(&ea, &eb);
                let p2 = self.product(&eb, &ea);
                let even: Vec<Scalar> = p1
                    .even
                    .iter()
                    .zip(&p2.even)
                    .map(|(x, y)| x.add(&sign.mul(y)))
                    .collect();
                let odd: Vec<Scalar> = p1
                    .odd
                    .iter()
                    .zip(&p2.odd)
                    .map(|(x, y)| x.add(&sign.mul(y)))
                    .collect();
                if !vec_is_zero(&even) || !vec_is_zero(&odd) {
                    return Some(format!("antisymmetry at basis pair ({a},{b})"));
                }
            }
        }
        for a in 0..total {
            for b in 0..total {
                for c in 0..total {
                    let (ea, da) = self.basis_elem(a);
                    let (eb, db) = self.basis_elem(b);
                    let (ec, dc) = self.basis_elem(c);
                    let mut sum = self.zero_elem();
                    let terms = [
                        (
                            self.mult.eps.eval(&dc, &da),
                            self.product(&self.product(&ea, &eb), &ec),
                        ),
                        (
                            self.mult.eps.eval(&da, &db),
                            self.product(&self.product(&eb, &ec), &ea),
                        ),
                        (
                            self.mult.eps.eval(&db, &dc),
                            self.product(&self.product(&ec, &ea), &eb),
                        ),
                    ];
                    for (sign, term) in &terms {
                        for (r, x) in term.even.iter().enumerate() {
                            sum.even[r] = sum.even[r].add(&sign.mul(x));
                        }
                        for (r, x) in term.odd.iter().enumerate() {
                            sum.odd[r] = sum.odd[r].add(&sign.mul(x));
                        }
                    }
                    if !vec_is_zero(&sum.even) || !vec_is_zero(&sum.odd) {
                        return Some(format!("color Jacobi at basis triple ({a},{b},{c})"));
                    }
                }
            }
        }
        None
    }
}

/// Extracts the operator algebra: greedy lex-ordered independent subset of
/// the vectorized basis operators, the flavor-appropriate bracket, and the
/// conjugation automorphism. Closure and the mixed product law are verified
/// on every basis pair.
pub fn build_mult_algebra(a: &GradedAlgebra) -> Result<MultAlgebra, EnvelopeError> {
    let spec = a.field();
    let n = a.dim();
    let phi_inv = a.phi_inv().cloned().ok_or(EnvelopeError::SingularPhi)?;
    let hom = a.flavor().is_hom();

    let mut ops = Vec::new();
    let mut op_pairs = Vec::new();
    let mut op_degrees = Vec::new();
    let mut span = Subspace::zero(spec, n * n);
    for i in 0..n {
        for j in 0..n {
            let m = a.ad_basis(i, j);
            if m.is_zero() {
                continue;
            }
            let d = a.group().add(a.deg(i), a.deg(j));
            for l in 0..n {
                for k in 0..n {
                    if !m.at(l, k).is_zero()
                        && *a.deg(l) != a.group().add(&d, a.deg(k))
                    {
                        return Err(EnvelopeError::NotGraded { i, j });
                    }
                }
            }
            let v = m.flatten();
            if !span.contains_vector(&v) {
                span = span.sum(&Subspace::from_rows(spec, n * n, vec![v]));
                ops.push(m);
                op_pairs.push((i, j));
                op_degrees.push(d);
            }
        }
    }

    let ops_stack = Matrix::from_rows(
        spec,
        n * n,
        ops.iter().map(|m| m.flatten()).collect(),
    );
    let mut mult = MultAlgebra {
        field: spec,
        group: a.group().clone(),
        eps: a.bicharacter().clone(),
        parent_dim: n,
        hom,
        phi: a.phi().clone(),
        phi_inv: phi_inv.clone(),
        ops,
        op_pairs,
        op_degrees,
        ops_stack,
        bracket_tensor: Vec::new(),
        phi_op: Matrix::zero(spec, 0, 0),
    };

    let m = mult.ops.len();
    let twist = |v: &[Scalar]| -> Vec<Scalar> {
        if hom {
            phi_inv.apply(v)
        } else {
            v.to_vec()
        }
    };

    // bracket tensor plus the derived product formula as a certificate
    let mut tensor = vec![vec![Vec::new(); m]; m];
    for p in 0..m {
        for q in 0..m {
            let br = mult.bracket_matrices(
                &mult.ops[p],
                &mult.op_degrees[p],
                &mult.ops[q],
                &mult.op_degrees[q],
            );
            let (i, j) = mult.op_pairs[p];
            let (k, l) = mult.op_pairs[q];
            let first = a.ad_operator(&twist(&a.bracket_unit(i, j, k)), &unit_vector(spec, n, l));
            let second = a
                .ad_operator(&unit_vector(spec, n, k), &twist(&a.bracket_unit(i, j, l)))
                .scale(&a.eps(&mult.op_degrees[p], a.deg(k)));
            if br != first.add(&second) {
                return Err(EnvelopeError::ClosureFailure { p, q });
            }
            tensor[p][q] = mult
                .coords_of(&br)
                .ok_or(EnvelopeError::ClosureFailure { p, q })?;
        }
    }
    mult.bracket_tensor = tensor;

    // mixed law: [l, ad(a,b)] = ad(tw(l)a, b) + eps(l,a) ad(a, tw(l)b)
    for p in 0..m {
        let op = &mult.ops[p];
        let dp = mult.op_degrees[p].clone();
        for i in 0..n {
            for j in 0..n {
                let ad_ij = a.ad_basis(i, j);
                let dij = a.group().add(a.deg(i), a.deg(j));
                let lhs = mult.bracket_matrices(op, &dp, &ad_ij, &dij);
                let va = twist(&op.column(i));
                let vb = twist(&op.column(j));
                let rhs = a
                    .ad_operator(&va, &unit_vector(spec, n, j))
                    .add(&a.ad_operator(&unit_vector(spec, n, i), &vb).scale(&a.eps(&dp, a.deg(i))));
                if lhs != rhs {
                    return Err(EnvelopeError::ClosureFailure { p, q: i * n + j });
                }
            }
        }
    }

    // conjugation automorphism in op coordinates
    let mut phi_op = Matrix::zero(spec, m, m);
    for p in 0..m {
        let conj = mult.phi.matmul(&mult.ops[p]).matmul(&mult.phi_inv);
        let coords = mult
            .coords_of(&conj)
            .ok_or(EnvelopeError::NotClosedUnderPhi { op: p })?;
        for (r, c) in coords.into_iter().enumerate() {
            *phi_op.at_mut(r, p) = c;
        }
    }
    mult.phi_op = phi_op;

    Ok(mult)
}

/// Assembles the two-graded envelope on top of the operator algebra.
pub fn build_envelope(a: &GradedAlgebra) -> Result<Envelope, EnvelopeError> {
    let mult = build_mult_algebra(a)?;
    let spec = a.field();
    let n = a.dim();
    let m = mult.dim();
    let twist: Matrix = if mult.hom {
        mult.phi_inv.clone()
    } else {
        Matrix::identity(spec, n)
    };

    let mut even_odd = Vec::with_capacity(m);
    let mut odd_even = Vec::with_capacity(m);
    for p in 0..m {
        let act = twist.matmul(&mult.ops[p]);
        let mut back = Matrix::zero(spec, n, n);
        for k in 0..n {
            let sign = a.eps(a.deg(k), &mult.op_degrees[p]).neg();
            for r in 0..n {
                *back.at_mut(r, k) = act.at(r, k).mul(&sign);
            }
        }
        even_odd.push(act);
        odd_even.push(back);
    }

    let mut odd_odd = vec![vec![Vec::new(); n]; n];
    for (i, row) in odd_odd.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = mult
                .coords_of(&a.ad_basis(i, j))
                .expect("ad(e_i, e_j) lies in the operator span by construction");
        }
    }

    Ok(Envelope {
        mult,
        odd_degrees: a.degrees().to_vec(),
        even_odd,
        odd_even,
        odd_odd,
    })
}

/// Certificate data for the isomorphism between the envelope of a hom
/// algebra and the envelope of its inverse-twisted plain counterpart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsomorphismCertificate {
    pub even_dim: usize,
    pub odd_dim: usize,
    pub products_checked: usize,
}

/// Builds both envelopes and certifies that the map fixing T and sending
/// each operator l to phi^{-1} l is a product isomorphism commuting with the
/// global automorphisms.
pub fn check_embedding_isomorphism(
    a: &GradedAlgebra,
) -> Result<IsomorphismCertificate, EnvelopeError> {
    if a.flavor() != Flavor::HomLeibniz {
        return Err(EnvelopeError::WrongFlavor {
            expected: Flavor::HomLeibniz.as_str().to_string(),
            found: a.flavor().as_str().to_string(),
        });
    }
    let plain = a.dehomify().map_err(|e| match e {
        crate::algebra::AlgebraError::SingularPhi => EnvelopeError::SingularPhi,
        crate::algebra::AlgebraError::IdentityFailure => EnvelopeError::IdentityFailure,
        other => EnvelopeError::IsomorphismFailure {
            detail: other.to_string(),
        },
    })?;
    let env_h = build_envelope(a)?;
    let env_p = build_envelope(&plain)?;

    // The twisted operators phi^{-1} ad(e_i,e_j) are exactly the plain
    // algebra's operators, so the greedy selection picks the same pairs and
    // the isomorphism is the identity in these coordinates.
    if env_h.mult.op_pairs != env_p.mult.op_pairs {
        return Err(EnvelopeError::IsomorphismFailure {
            detail: "operator bases chose different generating pairs".to_string(),
        });
    }
    for p in 0..env_h.even_dim() {
        let mapped = env_h.mult.phi_inv.matmul(&env_h.mult.ops[p]);
        if mapped != env_p.mult.ops[p] {
            return Err(EnvelopeError::IsomorphismFailure {
                detail: format!("operator {p} does not map onto its twisted image"),
            });
        }
    }

    let total = env_h.even_dim() + env_h.odd_dim();
    let mut checked = 0usize;
    for x in 0..total {
        for y in 0..total {
            let (ex, _) = env_h.basis_elem(x);
            let (ey, _) = env_h.basis_elem(y);
            // identity coordinates on both sides
            let lhs = env_h.product(&ex, &ey);
            let rhs = env_p.product(&ex, &ey);
            if lhs != rhs {
                return Err(EnvelopeError::IsomorphismFailure {
                    detail: format!("product mismatch at basis pair ({x},{y})"),
                });
            }
            checked += 1;
        }
    }
    for x in 0..total {
        let (ex, _) = env_h.basis_elem(x);
        let lhs = env_p.apply_big_phi(&ex);
        let rhs = env_h.apply_big_phi(&ex);
        if lhs != rhs {
            return Err(EnvelopeError::IsomorphismFailure {
                detail: format!("automorphism transport mismatch at basis element {x}"),
            });
        }
    }

    Ok(IsomorphismCertificate {
        even_dim: env_h.even_dim(),
        odd_dim: env_h.odd_dim(),
        products_checked: checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{structure_from_entries, Flavor, GradedAlgebra};
    use crate::field::FieldSpec;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn sl2(phi: Matrix, flavor: Flavor) -> GradedAlgebra {
        let spec = q();
        let group = GradingGroup::trivial();
        let e = |k: i64| spec.integer(k);
        let entries = vec![
            (0, 1, 0, 0, e(2)),
            (0, 1, 1, 1, e(-2)),
            (1, 0, 0, 0, e(-2)),
            (1, 0, 1, 1, e(2)),
            (2, 0, 1, 2, e(2)),
            (2, 0, 2, 0, e(-4)),
            (0, 2, 1, 2, e(-2)),
            (0, 2, 2, 0, e(4)),
            (2, 1, 0, 2, e(2)),
            (2, 1, 2, 1, e(-4)),
            (1, 2, 0, 2, e(-2)),
            (1, 2, 2, 1, e(4)),
        ];
        GradedAlgebra::new(
            spec,
            group.clone(),
            Bicharacter::trivial(spec, 0),
            vec!["e".into(), "f".into(), "h".into()],
            vec![group.zero(), group.zero(), group.zero()],
            structure_from_entries(entries),
            phi,
            flavor,
        )
    }

    fn signed_phi() -> Matrix {
        Matrix::from_i64(q(), vec![vec![-1, 0, 0], vec![0, -1, 0], vec![0, 0, 1]])
    }

    #[test]
    fn sl2_operator_algebra_has_dimension_three() {
        let a = sl2(Matrix::identity(q(), 3), Flavor::LeibnizWithAutomorphism);
        let mult = build_mult_algebra(&a).unwrap();
        assert_eq!(mult.dim(), 3);
        assert_eq!(mult.op_pairs(), &[(0, 1), (0, 2), (1, 2)]);
        assert_eq!(mult.op_label(0, a.basis_names()), "ad(e,f)");
    }

    #[test]
    fn sl2_operator_bracket_matches_hand_computation() {
        let a = sl2(Matrix::identity(q(), 3), Flavor::LeibnizWithAutomorphism);
        let mult = build_mult_algebra(&a).unwrap();
        // [ad(e,f), ad(e,h)] = ad([e,f,e],h) + ad(e,[e,f,h]) = 2 ad(e,h)
        assert_eq!(
            mult.bracket_tensor()[0][1],
            vec![q().zero(), q().integer(2), q().zero()]
        );
        assert!(mult.color_law_violation().is_none());
        assert!(mult.phi_preserves_bracket());
    }

    #[test]
    fn conjugation_automorphism_in_op_coordinates() {
        let a = sl2(signed_phi(), Flavor::LeibnizWithAutomorphism);
        let mult = build_mult_algebra(&a).unwrap();
        // ad(phi e, phi f) = ad(e,f); the other two generators flip sign
        assert_eq!(
            *mult.phi_op(),
            Matrix::from_i64(q(), vec![vec![1, 0, 0], vec![0, -1, 0], vec![0, 0, -1]])
        );
    }

    #[test]
    fn broken_identity_shows_up_as_closure_failure() {
        let spec = q();
        let group = GradingGroup::trivial();
        let broken = GradedAlgebra::new(
            spec,
            group.clone(),
            Bicharacter::trivial(spec, 0),
            vec!["e".into(), "f".into()],
            vec![group.zero(), group.zero()],
            structure_from_entries(vec![(0, 1, 0, 0, spec.integer(3))]),
            Matrix::identity(spec, 2),
            Flavor::LeibnizWithAutomorphism,
        );
        assert!(matches!(
            build_mult_algebra(&broken),
            Err(EnvelopeError::ClosureFailure { .. })
        ));
    }

    #[test]
    fn envelope_actions_for_sl2() {
        let a = sl2(Matrix::identity(q(), 3), Flavor::LeibnizWithAutomorphism);
        let env = build_envelope(&a).unwrap();
        // ad(e,f) acts as diag(2,-2,0); odd-even flips the sign
        assert_eq!(
            *env.even_odd_action(0),
            Matrix::from_i64(q(), vec![vec![2, 0, 0], vec![0, -2, 0], vec![0, 0, 0]])
        );
        assert_eq!(
            *env.odd_even_action(0),
            Matrix::from_i64(q(), vec![vec![-2, 0, 0], vec![0, 2, 0], vec![0, 0, 0]])
        );
        // e . f = ad(e,f), the first basis op
        assert_eq!(
            env.odd_odd_coords(0, 1),
            &[q().one(), q().zero(), q().zero()]
        );
        assert!(env.phi_is_multiplicative());
    }

    #[test]
    fn hom_envelope_action_carries_the_inverse_twist() {
        let a = sl2(signed_phi(), Flavor::LeibnizWithAutomorphism);
        let hom = a.homify().unwrap();
        let env = build_envelope(&hom).unwrap();
        // phi^{-1} ad_hom(e,f) = ad_plain(e,f) = diag(2,-2,0)
        assert_eq!(
            *env.even_odd_action(0),
            Matrix::from_i64(q(), vec![vec![2, 0, 0], vec![0, -2, 0], vec![0, 0, 0]])
        );
        assert!(env.phi_is_multiplicative());
        assert!(env.mult().color_law_violation().is_none());
    }

    #[test]
    fn lie_triple_source_gives_a_color_lie_envelope() {
        let a = sl2(Matrix::identity(q(), 3), Flavor::LeibnizWithAutomorphism);
        let env = build_envelope(&a).unwrap();
        assert!(env.color_law_violation().is_none());
    }

    #[test]
    fn zero_product_algebra_has_empty_operator_span() {
        let spec = q();
        let group = GradingGroup::trivial();
        let zero = GradedAlgebra::new(
            spec,
            group.clone(),
            Bicharacter::trivial(spec, 0),
            vec!["u".into(), "v".into()],
            vec![group.zero(), group.zero()],
            Default::default(),
            Matrix::identity(spec, 2),
            Flavor::LeibnizWithAutomorphism,
        );
        let env = build_envelope(&zero).unwrap();
        assert_eq!(env.even_dim(), 0);
        let u = EnvElem {
            even: vec![],
            odd: vec![spec.one(), spec.zero()],
        };
        let v = EnvElem {
            even: vec![],
            odd: vec![spec.zero(), spec.one()],
        };
        let p = env.product(&u, &v);
        assert!(vec_is_zero(&p.odd) && p.even.is_empty());
    }

    #[test]
    fn embedding_isomorphism_certificate_for_homified_sl2() {
        let hom = sl2(signed_phi(), Flavor::LeibnizWithAutomorphism)
            .homify()
            .unwrap();
        let cert = check_embedding_isomorphism(&hom).unwrap();
        assert_eq!(cert.even_dim, 3);
        assert_eq!(cert.odd_dim, 3);
        assert_eq!(cert.products_checked, 36);
    }

    #[test]
    fn embedding_isomorphism_requires_the_hom_flavor() {
        let a = sl2(Matrix::identity(q(), 3), Flavor::LeibnizWithAutomorphism);
        assert!(matches!(
            check_embedding_isomorphism(&a),
            Err(EnvelopeError::WrongFlavor { .. })
        ));
    }
}
