//! Root space decompositions relative to a maximal abelian subalgebra.
//!
//! A MASA is a family of commuting degree-zero operators, maximal inside the
//! grade-zero part of the operator algebra. T splits into simultaneous
//! eigenspaces under the envelope action of the MASA, and the operator
//! algebra splits under the adjoint action. Roots are the nonzero functionals
//! carved out this way, stored as value tuples on the MASA basis. Splitness
//! is verified, never assumed: a defect is an error carrying the first
//! offending MASA element.

use crate::algebra::GradedAlgebra;
use crate::envelope::{Envelope, MultAlgebra};
use crate::field::{FieldSpec, Scalar};
use crate::grading::GroupElement;
use crate::linalg::{vec_is_zero, vec_zero, Matrix, Subspace};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootSide {
    OddPart,
    EvenPart,
}

impl fmt::Display for RootSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootSide::OddPart => f.write_str("T"),
            RootSide::EvenPart => f.write_str("the operator algebra"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootsError {
    #[error("MASA element {index} is not homogeneous of degree zero")]
    NotGradeZero { index: usize },
    #[error("MASA elements are linearly dependent")]
    DependentElements,
    #[error("MASA elements {i} and {j} do not commute")]
    NotAbelian { i: usize, j: usize },
    #[error("MASA is not maximal: a commuting grade-zero operator lies outside the span")]
    NotMaximal { witness: Vec<Scalar> },
    #[error("MASA span is not invariant under the conjugation automorphism")]
    NotInvariant,
    #[error(
        "{side} does not split under MASA element {element}: defect dimension {defect}{}",
        if *.hints_may_help { "; eigenvalues may lie outside the searched set, eigen hints can help" } else { "" }
    )]
    NotSplit {
        side: RootSide,
        element: usize,
        defect: usize,
        hints_may_help: bool,
    },
}

/// A candidate maximal abelian family, as op-basis coordinate vectors, with
/// optional eigenvalue hints per element for non-rational spectra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Masa {
    pub elements: Vec<Vec<Scalar>>,
    pub eigen_hints: Vec<Vec<Scalar>>,
}

impl Masa {
    pub fn new(elements: Vec<Vec<Scalar>>) -> Masa {
        Masa {
            elements,
            eigen_hints: Vec::new(),
        }
    }

    pub fn with_hints(elements: Vec<Vec<Scalar>>, eigen_hints: Vec<Vec<Scalar>>) -> Masa {
        Masa {
            elements,
            eigen_hints,
        }
    }

    pub fn rank(&self) -> usize {
        self.elements.len()
    }

    fn hints_for(&self, i: usize) -> Vec<Scalar> {
        self.eigen_hints.get(i).cloned().unwrap_or_default()
    }
}

/// A linear functional on the MASA, stored as its values on the MASA basis.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootFunctional {
    values: Vec<Scalar>,
}

impl RootFunctional {
    pub fn new(values: Vec<Scalar>) -> RootFunctional {
        RootFunctional { values }
    }

    pub fn zero(spec: FieldSpec, rank: usize) -> RootFunctional {
        RootFunctional {
            values: vec_zero(spec, rank),
        }
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        vec_is_zero(&self.values)
    }

    pub fn add(&self, other: &RootFunctional) -> RootFunctional {
        assert_eq!(self.values.len(), other.values.len());
        RootFunctional {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> RootFunctional {
        RootFunctional {
            values: self.values.iter().map(|a| a.neg()).collect(),
        }
    }
}

impl fmt::Display for RootFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.values.len() == 1 {
            return write!(f, "{}", self.values[0]);
        }
        write!(f, "(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Simultaneous eigenspace data for T (odd side) and the operator algebra
/// (even side), plus the transport of functionals along the automorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootDecomposition {
    field: FieldSpec,
    masa: Masa,
    t_dim: usize,
    l_dim: usize,
    t_zero: Subspace,
    t_roots: BTreeMap<RootFunctional, Subspace>,
    l_zero: Subspace,
    l_roots: BTreeMap<RootFunctional, Subspace>,
    /// column i = coordinates of Phi(h_i) in the MASA basis
    phi_on_masa: Matrix,
    /// transport alpha -> alpha . Phi on value tuples (transpose of the above)
    phi_transport: Matrix,
    phi_transport_inv: Matrix,
}

impl RootDecomposition {
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn masa(&self) -> &Masa {
        &self.masa
    }

    pub fn rank(&self) -> usize {
        self.masa.rank()
    }

    pub fn t_zero(&self) -> &Subspace {
        &self.t_zero
    }

    pub fn l_zero(&self) -> &Subspace {
        &self.l_zero
    }

    pub fn lambda_t(&self) -> Vec<RootFunctional> {
        self.t_roots.keys().cloned().collect()
    }

    pub fn lambda_l(&self) -> Vec<RootFunctional> {
        self.l_roots.keys().cloned().collect()
    }

    pub fn t_roots(&self) -> &BTreeMap<RootFunctional, Subspace> {
        &self.t_roots
    }

    pub fn l_roots(&self) -> &BTreeMap<RootFunctional, Subspace> {
        &self.l_roots
    }

    pub fn is_t_root(&self, f: &RootFunctional) -> bool {
        self.t_roots.contains_key(f)
    }

    pub fn is_l_root(&self, f: &RootFunctional) -> bool {
        self.l_roots.contains_key(f)
    }

    /// Root space of T for a functional: the stored eigenspace, the zero
    /// space for the zero functional, or the zero subspace.
    pub fn t_space(&self, f: &RootFunctional) -> Subspace {
        if f.is_zero() {
            return self.t_zero.clone();
        }
        self.t_roots
            .get(f)
            .cloned()
            .unwrap_or_else(|| Subspace::zero(self.field, self.t_dim))
    }

    pub fn l_space(&self, f: &RootFunctional) -> Subspace {
        if f.is_zero() {
            return self.l_zero.clone();
        }
        self.l_roots
            .get(f)
            .cloned()
            .unwrap_or_else(|| Subspace::zero(self.field, self.l_dim))
    }

    /// Both root systems carry every negative: needed by the whole chain
    /// theory downstream.
    pub fn t_symmetric(&self) -> bool {
        self.t_roots.keys().all(|f| self.t_roots.contains_key(&f.neg()))
    }

    pub fn l_symmetric(&self) -> bool {
        self.l_roots.keys().all(|f| self.l_roots.contains_key(&f.neg()))
    }

    pub fn zero_functional(&self) -> RootFunctional {
        RootFunctional::zero(self.field, self.masa.rank())
    }

    /// alpha composed with the conjugation automorphism restricted to the
    /// MASA.
    pub fn root_after_phi(&self, f: &RootFunctional) -> RootFunctional {
        RootFunctional {
            values: self.phi_transport.apply(&f.values),
        }
    }

    pub fn root_after_phi_inv(&self, f: &RootFunctional) -> RootFunctional {
        RootFunctional {
            values: self.phi_transport_inv.apply(&f.values),
        }
    }

    /// The forward orbit of a functional under the transport, up to first
    /// repetition (a permutation brings it back to the start).
    pub fn phi_orbit(&self, f: &RootFunctional) -> Vec<RootFunctional> {
        let mut orbit = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        let mut cur = f.clone();
        while seen.insert(cur.clone()) {
            orbit.push(cur.clone());
            cur = self.root_after_phi(&cur);
        }
        orbit
    }

    pub fn phi_on_masa(&self) -> &Matrix {
        &self.phi_on_masa
    }
}

/// Checks the MASA contract: grade zero, independent, abelian, maximal
/// inside the grade-zero operators, and invariant under conjugation.
pub fn validate_masa(mult: &MultAlgebra, masa: &Masa) -> Result<(), RootsError> {
    let spec = mult.field();
    let m = mult.dim();
    for (idx, h) in masa.elements.iter().enumerate() {
        assert_eq!(h.len(), m, "MASA coordinates must live in the op basis");
        for (p, c) in h.iter().enumerate() {
            if !c.is_zero() && !mult.op_degrees()[p].is_zero() {
                return Err(RootsError::NotGradeZero { index: idx });
            }
        }
    }
    let stack = Matrix::from_rows(spec, m, masa.elements.clone());
    if stack.rank() != masa.elements.len() {
        return Err(RootsError::DependentElements);
    }
    for i in 0..masa.elements.len() {
        for j in i..masa.elements.len() {
            let br = mult.bracket_coords(&masa.elements[i], &masa.elements[j]);
            if !vec_is_zero(&br) {
                return Err(RootsError::NotAbelian { i, j });
            }
        }
    }
    let span = Subspace::from_rows(spec, m, masa.elements.clone());
    let mut centralizer = mult.grade_zero();
    for h in &masa.elements {
        centralizer = centralizer.intersect(&mult.ad_even_matrix(h).kernel());
    }
    if centralizer != span {
        let witness = centralizer
            .basis_rows()
            .find(|row| !span.contains_vector(row))
            .map(|row| row.to_vec())
            .unwrap_or_else(|| vec_zero(spec, m));
        return Err(RootsError::NotMaximal { witness });
    }
    if span.image_under(mult.phi_op()) != span {
        return Err(RootsError::NotInvariant);
    }
    Ok(())
}

fn refine(
    spec: FieldSpec,
    dim: usize,
    actions: &[Matrix],
    masa: &Masa,
    side: RootSide,
) -> Result<Vec<(Vec<Scalar>, Subspace)>, RootsError> {
    let mut leaves: Vec<(Vec<Scalar>, Subspace)> =
        vec![(Vec::new(), Subspace::full(spec, dim))];
    for (idx, action) in actions.iter().enumerate() {
        let hints = masa.hints_for(idx);
        let mut next = Vec::new();
        for (values, space) in leaves {
            if space.is_zero() {
                continue;
            }
            let restricted = space
                .restrict_operator(action)
                .expect("commuting MASA actions preserve every refinement stage");
            let mut covered = 0usize;
            for lam in restricted.field_eigenvalues(&hints) {
                let eig = restricted.eigenspace(&lam);
                if eig.is_zero() {
                    continue;
                }
                covered += eig.dim();
                let rows: Vec<Vec<Scalar>> =
                    eig.basis_rows().map(|r| space.lift(r)).collect();
                let mut vals = values.clone();
                vals.push(lam.clone());
                next.push((vals, Subspace::from_rows(spec, dim, rows)));
            }
            if covered < space.dim() {
                let char_poly = restricted.char_poly();
                let hints_may_help =
                    spec.order() > 1 || char_poly.iter().any(|c| !c.is_rational());
                return Err(RootsError::NotSplit {
                    side,
                    element: idx,
                    defect: space.dim() - covered,
                    hints_may_help,
                });
            }
        }
        leaves = next;
    }
    Ok(leaves)
}

/// Simultaneous eigenspace decomposition of T under the envelope action of
/// the MASA and of the operator algebra under the adjoint action. Errors if
/// either side fails to split.
pub fn decompose_roots(
    a: &GradedAlgebra,
    env: &Envelope,
    masa: &Masa,
) -> Result<RootDecomposition, RootsError> {
    validate_masa(env.mult(), masa)?;
    let spec = a.field();
    let n = a.dim();
    let m = env.even_dim();
    let r = masa.rank();

    let t_actions: Vec<Matrix> = masa
        .elements
        .iter()
        .map(|h| env.even_action_matrix(h))
        .collect();
    let l_actions: Vec<Matrix> = masa
        .elements
        .iter()
        .map(|h| env.mult().ad_even_matrix(h))
        .collect();

    let t_leaves = refine(spec, n, &t_actions, masa, RootSide::OddPart)?;
    let l_leaves = refine(spec, m, &l_actions, masa, RootSide::EvenPart)?;

    let mut t_zero = Subspace::zero(spec, n);
    let mut t_roots = BTreeMap::new();
    for (values, space) in t_leaves {
        let f = RootFunctional::new(values);
        if f.is_zero() {
            t_zero = space;
        } else {
            t_roots.insert(f, space);
        }
    }
    let mut l_zero = Subspace::zero(spec, m);
    let mut l_roots = BTreeMap::new();
    for (values, space) in l_leaves {
        let f = RootFunctional::new(values);
        if f.is_zero() {
            l_zero = space;
        } else {
            l_roots.insert(f, space);
        }
    }

    // transport of functionals along the conjugation automorphism
    let masa_stack = Matrix::from_rows(spec, m, masa.elements.clone());
    let mut phi_on_masa = Matrix::zero(spec, r, r);
    for (i, h) in masa.elements.iter().enumerate() {
        let img = env.mult().phi_op().apply(h);
        let coords = masa_stack
            .solve_left(&img)
            .expect("the validated MASA span is invariant under conjugation");
        for (j, c) in coords.into_iter().enumerate() {
            *phi_on_masa.at_mut(j, i) = c;
        }
    }
    let phi_transport = phi_on_masa.transpose();
    let phi_transport_inv = phi_transport
        .inverse()
        .expect("conjugation restricts to an invertible map on the MASA");

    Ok(RootDecomposition {
        field: spec,
        masa: masa.clone(),
        t_dim: n,
        l_dim: m,
        t_zero,
        t_roots,
        l_zero,
        l_roots,
        phi_on_masa,
        phi_transport,
        phi_transport_inv,
    })
}

/// One named certificate with an optional first violation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyResult {
    pub name: String,
    pub violation: Option<String>,
}

impl PropertyResult {
    pub fn pass(&self) -> bool {
        self.violation.is_none()
    }
}

/// The root space property suite: seven product containments, automorphism
/// transport of root spaces, orbit closure, symmetry flags, and gradedness
/// of every root space. A violation indicates an implementation bug, not bad
/// input.
pub fn check_root_properties(
    a: &GradedAlgebra,
    env: &Envelope,
    d: &RootDecomposition,
) -> Vec<PropertyResult> {
    let spec = a.field();
    let mut out = Vec::new();
    let zero = d.zero_functional();
    let mut t_all: Vec<RootFunctional> = vec![zero.clone()];
    t_all.extend(d.lambda_t());
    let mut l_all: Vec<RootFunctional> = vec![zero.clone()];
    l_all.extend(d.lambda_l());

    // (i) ad(T_a, T_b) lands in the operator root space of a+b
    let mut violation = None;
    'item1: for fa in &t_all {
        for fb in &t_all {
            let sa = d.t_space(fa);
            let sb = d.t_space(fb);
            let mut rows = Vec::new();
            for u in sa.basis_rows() {
                for v in sb.basis_rows() {
                    let coords = env
                        .mult()
                        .coords_of(&a.ad_operator(u, v))
                        .expect("operators of T lie in the operator span");
                    if !vec_is_zero(&coords) {
                        rows.push(coords);
                    }
                }
            }
            let span = Subspace::from_rows(spec, env.even_dim(), rows);
            if !span.is_zero() && !d.l_space(&fa.add(fb)).contains(&span) {
                violation = Some(format!("ad(T_{fa}, T_{fb}) escapes its root space"));
                break 'item1;
            }
        }
    }
    out.push(PropertyResult {
        name: "operator images of root space pairs respect root sums".into(),
        violation,
    });

    // (ii) even . odd lands in the sum root space
    let mut violation = None;
    'item2: for fd in &l_all {
        for fa in &t_all {
            let sd = d.l_space(fd);
            let sa = d.t_space(fa);
            let mut rows = Vec::new();
            for l in sd.basis_rows() {
                let act = env.even_action_matrix(l);
                for v in sa.basis_rows() {
                    let w = act.apply(v);
                    if !vec_is_zero(&w) {
                        rows.push(w);
                    }
                }
            }
            let span = Subspace::from_rows(spec, a.dim(), rows);
            if !span.is_zero() && !d.t_space(&fd.add(fa)).contains(&span) {
                violation = Some(format!("L_{fd} . T_{fa} escapes its root space"));
                break 'item2;
            }
        }
    }
    out.push(PropertyResult {
        name: "operator action on root spaces respects root sums".into(),
        violation,
    });

    // (iii) odd . even lands in the sum root space
    let mut violation = None;
    'item3: for fa in &t_all {
        for fd in &l_all {
            let sa = d.t_space(fa);
            let sd = d.l_space(fd);
            let mut rows = Vec::new();
            for v in sa.basis_rows() {
                for l in sd.basis_rows() {
                    let mut w = vec_zero(spec, a.dim());
                    for (p, c) in l.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let part = env.odd_even_action(p).apply(v);
                        for (rr, x) in part.into_iter().enumerate() {
                            w[rr] = w[rr].add(&c.mul(&x));
                        }
                    }
                    if !vec_is_zero(&w) {
                        rows.push(w);
                    }
                }
            }
            let span = Subspace::from_rows(spec, a.dim(), rows);
            if !span.is_zero() && !d.t_space(&fa.add(fd)).contains(&span) {
                violation = Some(format!("T_{fa} . L_{fd} escapes its root space"));
                break 'item3;
            }
        }
    }
    out.push(PropertyResult {
        name: "reverse action on root spaces respects root sums".into(),
        violation,
    });

    // (iv) operator bracket respects root sums
    let mut violation = None;
    'item4: for fd in &l_all {
        for fe in &l_all {
            let sd = d.l_space(fd);
            let se = d.l_space(fe);
            let mut rows = Vec::new();
            for x in sd.basis_rows() {
                for y in se.basis_rows() {
                    let br = env.mult().bracket_coords(x, y);
                    if !vec_is_zero(&br) {
                        rows.push(br);
                    }
                }
            }
            let span = Subspace::from_rows(spec, env.even_dim(), rows);
            if !span.is_zero() && !d.l_space(&fd.add(fe)).contains(&span) {
                violation = Some(format!("[L_{fd}, L_{fe}] escapes its root space"));
                break 'item4;
            }
        }
    }
    out.push(PropertyResult {
        name: "operator bracket respects root sums".into(),
        violation,
    });

    // (v) triple products (inverse-twisted in hom flavors) respect root sums
    let twist = if a.flavor().is_hom() {
        a.phi_inv().cloned()
    } else {
        None
    };
    let mut violation = None;
    'item5: for fa in &t_all {
        for fb in &t_all {
            for fc in &t_all {
                let span = a.triple_span_mapped(
                    &d.t_space(fa),
                    &d.t_space(fb),
                    &d.t_space(fc),
                    twist.as_ref(),
                );
                let sum = fa.add(fb).add(fc);
                if !span.is_zero() && !d.t_space(&sum).contains(&span) {
                    violation = Some(format!(
                        "[T_{fa}, T_{fb}, T_{fc}] escapes its root space"
                    ));
                    break 'item5;
                }
            }
        }
    }
    out.push(PropertyResult {
        name: "triple products of root spaces respect root sums".into(),
        violation,
    });

    // (vi) transport of T root spaces along phi, both ways, with orbit
    // closure
    let mut violation = None;
    for f in &t_all {
        let space = d.t_space(f);
        let fwd = space.image_under(a.phi());
        if !d.t_space(&d.root_after_phi_inv(f)).contains(&fwd) {
            violation = Some(format!("phi(T_{f}) escapes its transported root space"));
            break;
        }
        if let Some(pi) = a.phi_inv() {
            let back = space.image_under(pi);
            if !d.t_space(&d.root_after_phi(f)).contains(&back) {
                violation = Some(format!(
                    "phi^-1(T_{f}) escapes its transported root space"
                ));
                break;
            }
        }
        if !f.is_zero() && d.phi_orbit(f).iter().any(|g| !d.is_t_root(g)) {
            violation = Some(format!("the transport orbit of {f} leaves the root system"));
            break;
        }
    }
    out.push(PropertyResult {
        name: "automorphism transports T root spaces onto root spaces".into(),
        violation,
    });

    // (vii) transport of operator root spaces along conjugation
    let mut violation = None;
    for f in &l_all {
        let space = d.l_space(f);
        let fwd = space.image_under(env.mult().phi_op());
        if !d.l_space(&d.root_after_phi_inv(f)).contains(&fwd) {
            violation = Some(format!(
                "conjugation moves L_{f} off its transported root space"
            ));
            break;
        }
        if !f.is_zero() && d.phi_orbit(f).iter().any(|g| !d.is_l_root(g)) {
            violation = Some(format!(
                "the transport orbit of {f} leaves the operator root system"
            ));
            break;
        }
    }
    out.push(PropertyResult {
        name: "automorphism transports operator root spaces onto root spaces".into(),
        violation,
    });

    // gradedness of every root space
    let mut violation = None;
    for f in &t_all {
        if !subspace_is_graded(&d.t_space(f), a.degrees()) {
            violation = Some(format!("T_{f} is not spanned by homogeneous vectors"));
            break;
        }
    }
    if violation.is_none() {
        for f in &l_all {
            if !subspace_is_graded(&d.l_space(f), env.mult().op_degrees()) {
                violation = Some(format!("L_{f} is not spanned by homogeneous vectors"));
                break;
            }
        }
    }
    out.push(PropertyResult {
        name: "root spaces are graded subspaces".into(),
        violation,
    });

    // symmetry flags
    out.push(PropertyResult {
        name: "T root system is symmetric".into(),
        violation: if d.t_symmetric() {
            None
        } else {
            Some("a root is present without its negative".into())
        },
    });
    out.push(PropertyResult {
        name: "operator root system is symmetric".into(),
        violation: if d.l_symmetric() {
            None
        } else {
            Some("a root is present without its negative".into())
        },
    });

    // splitness bookkeeping: the eigenspaces genuinely fill both spaces
    let t_total: usize = d.t_zero.dim() + d.t_roots.values().map(|s| s.dim()).sum::<usize>();
    let l_total: usize = d.l_zero.dim() + d.l_roots.values().map(|s| s.dim()).sum::<usize>();
    out.push(PropertyResult {
        name: "root spaces fill both sides".into(),
        violation: if t_total == a.dim() && l_total == env.even_dim() {
            None
        } else {
            Some(format!(
                "dimension gap: T {} of {}, operators {} of {}",
                t_total,
                a.dim(),
                l_total,
                env.even_dim()
            ))
        },
    });

    out
}

/// Whether a subspace is spanned by vectors supported on single degrees.
pub fn subspace_is_graded(s: &Subspace, degrees: &[GroupElement]) -> bool {
    if s.is_zero() {
        return true;
    }
    let spec = s.spec();
    let ambient = s.ambient();
    let mut unique: Vec<&GroupElement> = Vec::new();
    for d in degrees {
        if !unique.contains(&d) {
            unique.push(d);
        }
    }
    let mut total = 0usize;
    for d in unique {
        let rows: Vec<Vec<Scalar>> = (0..ambient)
            .filter(|&i| &degrees[i] == d)
            .map(|i| crate::linalg::unit_vector(spec, ambient, i))
            .collect();
        let coord_block = Subspace::from_rows(spec, ambient, rows);
        total += s.intersect(&coord_block).dim();
    }
    total == s.dim()
}

/// Greedy MASA extension: keeps adjoining centralizer vectors whose actions
/// on both sides are diagonalizable, until the family is its own centralizer
/// in the grade-zero operators. Returns the family and whether maximality
/// was reached.
pub fn masa_search(
    env: &Envelope,
    start: Vec<Vec<Scalar>>,
    hints: &[Scalar],
) -> (Vec<Vec<Scalar>>, bool) {
    let mult = env.mult();
    let spec = mult.field();
    let m = mult.dim();
    let mut family = start;
    loop {
        let span = Subspace::from_rows(spec, m, family.clone());
        let mut centralizer = mult.grade_zero();
        for h in &family {
            centralizer = centralizer.intersect(&mult.ad_even_matrix(h).kernel());
        }
        if centralizer == span {
            return (family, true);
        }
        let candidate = centralizer.basis_rows().find(|row| {
            if span.contains_vector(row) {
                return false;
            }
            if !vec_is_zero(&mult.bracket_coords(row, row)) {
                return false;
            }
            diagonalizable(&env.even_action_matrix(row), hints)
                && diagonalizable(&mult.ad_even_matrix(row), hints)
        });
        match candidate {
            Some(row) => family.push(row.to_vec()),
            None => return (family, false),
        }
    }
}

fn diagonalizable(m: &Matrix, hints: &[Scalar]) -> bool {
    let mut covered = 0usize;
    for lam in m.field_eigenvalues(hints) {
        covered += m.eigenspace(&lam).dim();
    }
    covered == m.rows()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{structure_from_entries, Flavor, GradedAlgebra};
    use crate::envelope::build_envelope;
    use crate::grading::{Bicharacter, GradingGroup};
    use crate::linalg::unit_vector;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn sl2_entries(spec: FieldSpec, scale: &Scalar) -> Vec<(usize, usize, usize, usize, Scalar)> {
        let e = |k: i64| spec.integer(k).mul(scale);
        vec![
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
        ]
    }

    fn sl2(phi: Matrix) -> GradedAlgebra {
        let spec = q();
        let group = GradingGroup::trivial();
        GradedAlgebra::new(
            spec,
            group.clone(),
            Bicharacter::trivial(spec, 0),
            vec!["e".into(), "f".into(), "h".into()],
            vec![group.zero(), group.zero(), group.zero()],
            structure_from_entries(sl2_entries(spec, &spec.one())),
            phi,
            Flavor::LeibnizWithAutomorphism,
        )
    }

    fn masa_h() -> Masa {
        Masa::new(vec![vec![q().one(), q().zero(), q().zero()]])
    }

    #[test]
    fn masa_validation_on_sl2() {
        let a = sl2(Matrix::identity(q(), 3));
        let env = build_envelope(&a).unwrap();
        assert_eq!(validate_masa(env.mult(), &masa_h()), Ok(()));
        // the empty family is not maximal: ad(e,f) commutes with everything
        // in the grade-zero part
        let empty = Masa::new(vec![]);
        assert!(matches!(
            validate_masa(env.mult(), &empty),
            Err(RootsError::NotMaximal { .. })
        ));
    }

    #[test]
    fn sl2_root_systems() {
        let a = sl2(Matrix::identity(q(), 3));
        let env = build_envelope(&a).unwrap();
        let d = decompose_roots(&a, &env, &masa_h()).unwrap();
        let two = RootFunctional::new(vec![q().integer(2)]);
        let minus_two = two.neg();
        assert_eq!(d.lambda_t(), vec![minus_two.clone(), two.clone()]);
        assert_eq!(d.lambda_l(), vec![minus_two.clone(), two.clone()]);
        assert_eq!(d.t_zero().dim(), 1);
        assert!(d.t_zero().contains_vector(&unit_vector(q(), 3, 2)));
        assert!(d
            .t_space(&two)
            .contains_vector(&unit_vector(q(), 3, 0)));
        // L_0 is the MASA line itself
        assert!(d.l_zero().contains_vector(&unit_vector(q(), 3, 0)));
        assert_eq!(d.l_zero().dim(), 1);
        assert!(d.t_symmetric() && d.l_symmetric());
    }

    #[test]
    fn property_suite_passes_on_sl2() {
        let a = sl2(Matrix::from_i64(
            q(),
            vec![vec![-1, 0, 0], vec![0, -1, 0], vec![0, 0, 1]],
        ));
        let env = build_envelope(&a).unwrap();
        let d = decompose_roots(&a, &env, &masa_h()).unwrap();
        let results = check_root_properties(&a, &env, &d);
        for r in &results {
            assert!(r.pass(), "{}: {:?}", r.name, r.violation);
        }
        // phi fixes both roots: the transport is the identity
        let two = RootFunctional::new(vec![q().integer(2)]);
        assert_eq!(d.root_after_phi(&two), two);
    }

    #[test]
    fn hom_flavor_gives_the_same_roots_as_its_plain_counterpart() {
        let phi = Matrix::from_i64(q(), vec![vec![-1, 0, 0], vec![0, -1, 0], vec![0, 0, 1]]);
        let plain = sl2(phi);
        let hom = plain.homify().unwrap();
        let env_p = build_envelope(&plain).unwrap();
        let env_h = build_envelope(&hom).unwrap();
        let dp = decompose_roots(&plain, &env_p, &masa_h()).unwrap();
        let dh = decompose_roots(&hom, &env_h, &masa_h()).unwrap();
        assert_eq!(dp.lambda_t(), dh.lambda_t());
        assert_eq!(dp.lambda_l(), dh.lambda_l());
        for f in dp.lambda_t() {
            assert_eq!(dp.t_space(&f), dh.t_space(&f));
        }
        assert_eq!(dp.t_zero(), dh.t_zero());
        let results = check_root_properties(&hom, &env_h, &dh);
        for r in &results {
            assert!(r.pass(), "{}: {:?}", r.name, r.violation);
        }
    }

    #[test]
    fn cyclotomic_structure_needs_hints() {
        let spec = FieldSpec::new(4).unwrap();
        let group = GradingGroup::trivial();
        let i_unit = spec.root_of_unity(1);
        let a = GradedAlgebra::new(
            spec,
            group.clone(),
            Bicharacter::trivial(spec, 0),
            vec!["e".into(), "f".into(), "h".into()],
            vec![group.zero(), group.zero(), group.zero()],
            structure_from_entries(sl2_entries(spec, &i_unit)),
            Matrix::identity(spec, 3),
            Flavor::LeibnizWithAutomorphism,
        );
        let env = build_envelope(&a).unwrap();
        let bare = Masa::new(vec![vec![spec.one(), spec.zero(), spec.zero()]]);
        match decompose_roots(&a, &env, &bare) {
            Err(RootsError::NotSplit {
                hints_may_help: true,
                ..
            }) => {}
            other => panic!("expected a hint-flagged split failure, got {other:?}"),
        }
        let two_i = spec.parse("2*z").unwrap();
        let hinted = Masa::with_hints(
            vec![vec![spec.one(), spec.zero(), spec.zero()]],
            vec![vec![two_i.clone(), two_i.neg()]],
        );
        let d = decompose_roots(&a, &env, &hinted).unwrap();
        assert_eq!(d.lambda_t().len(), 2);
        assert!(d.is_t_root(&RootFunctional::new(vec![two_i])));
        let results = check_root_properties(&a, &env, &d);
        for r in &results {
            assert!(r.pass(), "{}: {:?}", r.name, r.violation);
        }
    }

    #[test]
    fn zero_product_algebra_decomposes_trivially() {
        let spec = q();
        let group = GradingGroup::trivial();
        let zero = GradedAlgebra::new(
            spec,
            group.clone(),
            Bicharacter::trivial(spec, 0),
            vec!["u".into()],
            vec![group.zero()],
            Default::default(),
            Matrix::identity(spec, 1),
            Flavor::LeibnizWithAutomorphism,
        );
        let env = build_envelope(&zero).unwrap();
        let masa = Masa::new(vec![]);
        assert_eq!(validate_masa(env.mult(), &masa), Ok(()));
        let d = decompose_roots(&zero, &env, &masa).unwrap();
        assert!(d.lambda_t().is_empty());
        assert_eq!(d.t_zero().dim(), 1);
    }

    #[test]
    fn masa_search_finds_the_sl2_masa() {
        let a = sl2(Matrix::identity(q(), 3));
        let env = build_envelope(&a).unwrap();
        let (family, complete) = masa_search(&env, vec![], &[]);
        assert!(complete);
        assert_eq!(family.len(), 1);
        assert_eq!(validate_masa(env.mult(), &Masa::new(family)), Ok(()));
    }

    #[test]
    fn functional_transport_follows_the_automorphism() {
        // two commuting sl2 blocks, phi swaps them
        let spec = q();
        let group = GradingGroup::trivial();
        let mut entries = Vec::new();
        for (i, j, k, l, c) in sl2_entries(spec, &spec.one()) {
            entries.push((i, j, k, l, c.clone()));
            entries.push((i + 3, j + 3, k + 3, l + 3, c));
        }
        let mut phi = Matrix::zero(spec, 6, 6);
        for i in 0..3 {
            *phi.at_mut(i, i + 3) = spec.one();
            *phi.at_mut(i + 3, i) = spec.one();
        }
        let a = GradedAlgebra::new(
            spec,
            group.clone(),
            Bicharacter::trivial(spec, 0),
            vec![
                "e1".into(),
                "f1".into(),
                "h1".into(),
                "e2".into(),
                "f2".into(),
                "h2".into(),
            ],
            vec![group.zero(); 6],
            structure_from_entries(entries),
            phi,
            Flavor::LeibnizWithAutomorphism,
        );
        assert!(a.check_automorphism().pass());
        let env = build_envelope(&a).unwrap();
        // ops: greedy picks ad(e1,f1) first and ad(e2,f2) later; find their
        // indices from the generating pairs
        let pairs = env.mult().op_pairs().to_vec();
        let p1 = pairs.iter().position(|&p| p == (0, 1)).unwrap();
        let p2 = pairs.iter().position(|&p| p == (3, 4)).unwrap();
        let m = env.even_dim();
        let mut h1 = vec_zero(spec, m);
        h1[p1] = spec.one();
        let mut h2 = vec_zero(spec, m);
        h2[p2] = spec.one();
        let masa = Masa::new(vec![h1, h2]);
        let d = decompose_roots(&a, &env, &masa).unwrap();
        assert_eq!(d.lambda_t().len(), 4);
        let alpha = RootFunctional::new(vec![spec.integer(2), spec.zero()]);
        let swapped = RootFunctional::new(vec![spec.zero(), spec.integer(2)]);
        assert_eq!(d.root_after_phi(&alpha), swapped);
        let results = check_root_properties(&a, &env, &d);
        for r in &results {
            assert!(r.pass(), "{}: {:?}", r.name, r.violation);
        }
    }
}
