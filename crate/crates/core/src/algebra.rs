//! Graded 3-algebras with a distinguished automorphism.
//!
//! A [`GradedAlgebra`] stores a basis, a degree for each basis element, a
//! sparse trilinear structure tensor, an even automorphism phi, and a flavor
//! naming which defining identity the data claims to satisfy. Nothing is
//! trusted: grading, the automorphism property, and the defining identity all
//! have explicit checks that either pass or return the first concrete
//! counterexample. Checking identities over all basis tuples is complete
//! because every law in play is multilinear.

use crate::field::{FieldSpec, Scalar};
use crate::grading::{Bicharacter, GradingGroup, GroupElement};
use crate::linalg::{unit_vector, vec_add_scaled, vec_is_zero, vec_zero, Matrix, Subspace};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

pub type StructureTensor = BTreeMap<(usize, usize, usize), Vec<(usize, Scalar)>>;

/// Which defining identity the algebra claims. The plain flavor ignores phi
/// in the identity (phi must still be an automorphism); the hom flavors twist
/// the outer arguments by phi. The two Lie-like flavors add symmetry laws on
/// top of the twisted identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flavor {
    LeibnizWithAutomorphism,
    HomLeibniz,
    HomLie3,
    HomLieTriple,
}

impl Flavor {
    pub fn as_str(self) -> &'static str {
        match self {
            Flavor::LeibnizWithAutomorphism => "leibniz_with_automorphism",
            Flavor::HomLeibniz => "hom_leibniz",
            Flavor::HomLie3 => "hom_lie_3",
            Flavor::HomLieTriple => "hom_lie_triple",
        }
    }

    pub fn parse(s: &str) -> Option<Flavor> {
        match s {
            "leibniz_with_automorphism" => Some(Flavor::LeibnizWithAutomorphism),
            "hom_leibniz" => Some(Flavor::HomLeibniz),
            "hom_lie_3" => Some(Flavor::HomLie3),
            "hom_lie_triple" => Some(Flavor::HomLieTriple),
            _ => None,
        }
    }

    /// Flavors whose defining identity twists outer arguments by phi.
    pub fn is_hom(self) -> bool {
        !matches!(self, Flavor::LeibnizWithAutomorphism)
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("the defining identity fails on the source algebra")]
    IdentityFailure,
    #[error("phi is not invertible")]
    SingularPhi,
    #[error("operation needs flavor {expected}, algebra has {found}")]
    WrongFlavor { expected: String, found: String },
    #[error("the triple product is identically zero")]
    ZeroProduct,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedAlgebra {
    field: FieldSpec,
    group: GradingGroup,
    eps: Bicharacter,
    basis_names: Vec<String>,
    degrees: Vec<GroupElement>,
    structure: StructureTensor,
    phi: Matrix,
    phi_inv: Option<Matrix>,
    flavor: Flavor,
}

/// Normalizes raw structure entries: merges duplicate (i,j,k,l) slots,
/// drops zero coefficients, keeps deterministic order.
pub fn structure_from_entries(
    entries: Vec<(usize, usize, usize, usize, Scalar)>,
) -> StructureTensor {
    let mut merged: BTreeMap<(usize, usize, usize), BTreeMap<usize, Scalar>> = BTreeMap::new();
    for (i, j, k, l, c) in entries {
        if c.is_zero() {
            continue;
        }
        let slot = merged.entry((i, j, k)).or_default();
        match slot.get(&l) {
            Some(prev) => {
                let sum = prev.add(&c);
                if sum.is_zero() {
                    slot.remove(&l);
                } else {
                    slot.insert(l, sum);
                }
            }
            None => {
                slot.insert(l, c);
            }
        }
    }
    merged
        .into_iter()
        .filter(|(_, outs)| !outs.is_empty())
        .map(|(key, outs)| (key, outs.into_iter().collect()))
        .collect()
}

impl GradedAlgebra {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        field: FieldSpec,
        group: GradingGroup,
        eps: Bicharacter,
        basis_names: Vec<String>,
        degrees: Vec<GroupElement>,
        structure: StructureTensor,
        phi: Matrix,
        flavor: Flavor,
    ) -> GradedAlgebra {
        let n = basis_names.len();
        assert!(n >= 1, "algebras here are at least one-dimensional");
        assert_eq!(degrees.len(), n);
        assert_eq!((phi.rows(), phi.cols()), (n, n));
        for (&(i, j, k), outs) in &structure {
            assert!(i < n && j < n && k < n, "structure index out of range");
            assert!(outs.iter().all(|(l, _)| *l < n));
        }
        let phi_inv = phi.inverse();
        GradedAlgebra {
            field,
            group,
            eps,
            basis_names,
            degrees,
            structure,
            phi,
            phi_inv,
            flavor,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis_names.len()
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn group(&self) -> &GradingGroup {
        &self.group
    }

    pub fn bicharacter(&self) -> &Bicharacter {
        &self.eps
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn degrees(&self) -> &[GroupElement] {
        &self.degrees
    }

    pub fn deg(&self, i: usize) -> &GroupElement {
        &self.degrees[i]
    }

    pub fn structure(&self) -> &StructureTensor {
        &self.structure
    }

    pub fn phi(&self) -> &Matrix {
        &self.phi
    }

    pub fn phi_inv(&self) -> Option<&Matrix> {
        self.phi_inv.as_ref()
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn eps(&self, a: &GroupElement, b: &GroupElement) -> Scalar {
        self.eps.eval(a, b)
    }

    pub fn bracket_is_zero(&self) -> bool {
        self.structure.is_empty()
    }

    /// Sparse product of three basis elements.
    pub fn bracket_basis(&self, i: usize, j: usize, k: usize) -> &[(usize, Scalar)] {
        self.structure
            .get(&(i, j, k))
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }

    /// Dense product of three basis elements.
    pub fn bracket_unit(&self, i: usize, j: usize, k: usize) -> Vec<Scalar> {
        let mut out = vec_zero(self.field, self.dim());
        for (l, c) in self.bracket_basis(i, j, k) {
            out[*l] = out[*l].add(c);
        }
        out
    }

    /// Trilinear product of arbitrary coordinate vectors.
    pub fn bracket(&self, x: &[Scalar], y: &[Scalar], z: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec_zero(self.field, self.dim());
        for (&(i, j, k), outs) in &self.structure {
            if x[i].is_zero() || y[j].is_zero() || z[k].is_zero() {
                continue;
            }
            let c = x[i].mul(&y[j]).mul(&z[k]);
            for (l, coef) in outs {
                out[*l] = out[*l].add(&c.mul(coef));
            }
        }
        out
    }

    /// [e_i, e_j, v]: only structure entries with first indices (i, j) fire.
    fn bracket_bbv(&self, i: usize, j: usize, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec_zero(self.field, self.dim());
        for (&(_, _, k), outs) in self.structure.range((i, j, 0)..=(i, j, usize::MAX)) {
            if v[k].is_zero() {
                continue;
            }
            for (l, coef) in outs {
                out[*l] = out[*l].add(&v[k].mul(coef));
            }
        }
        out
    }

    /// [v, e_j, e_k].
    fn bracket_vbb(&self, v: &[Scalar], j: usize, k: usize) -> Vec<Scalar> {
        let mut out = vec_zero(self.field, self.dim());
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (l, coef) in self.bracket_basis(i, j, k) {
                out[*l] = out[*l].add(&c.mul(coef));
            }
        }
        out
    }

    /// [e_i, v, e_k].
    fn bracket_bvb(&self, i: usize, v: &[Scalar], k: usize) -> Vec<Scalar> {
        let mut out = vec_zero(self.field, self.dim());
        for (j, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (l, coef) in self.bracket_basis(i, j, k) {
                out[*l] = out[*l].add(&c.mul(coef));
            }
        }
        out
    }

    pub fn apply_phi(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.phi.apply(v)
    }

    /// Matrix of the operator z -> [x, y, z].
    pub fn ad_operator(&self, x: &[Scalar], y: &[Scalar]) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zero(self.field, n, n);
        for (&(i, j, k), outs) in &self.structure {
            if x[i].is_zero() || y[j].is_zero() {
                continue;
            }
            let c = x[i].mul(&y[j]);
            for (l, coef) in outs {
                let cur = m.at(*l, k).add(&c.mul(coef));
                *m.at_mut(*l, k) = cur;
            }
        }
        m
    }

    /// Matrix of z -> [e_i, e_j, z].
    pub fn ad_basis(&self, i: usize, j: usize) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zero(self.field, n, n);
        for (&(_, _, k), outs) in self.structure.range((i, j, 0)..=(i, j, usize::MAX)) {
            for (l, coef) in outs {
                let cur = m.at(*l, k).add(coef);
                *m.at_mut(*l, k) = cur;
            }
        }
        m
    }

    /// Span of all products of basis vectors drawn from three subspaces.
    pub fn triple_span(&self, a: &Subspace, b: &Subspace, c: &Subspace) -> Subspace {
        self.triple_span_mapped(a, b, c, None)
    }

    /// As `triple_span` but post-composing each product with an operator
    /// (used for the inverse-twisted working bracket of hom flavors).
    pub fn triple_span_mapped(
        &self,
        a: &Subspace,
        b: &Subspace,
        c: &Subspace,
        map: Option<&Matrix>,
    ) -> Subspace {
        let mut rows = Vec::new();
        for u in a.basis_rows() {
            for v in b.basis_rows() {
                for w in c.basis_rows() {
                    let mut p = self.bracket(u, v, w);
                    if let Some(m) = map {
                        p = m.apply(&p);
                    }
                    if !vec_is_zero(&p) {
                        rows.push(p);
                    }
                }
            }
        }
        Subspace::from_rows(self.field, self.dim(), rows)
    }

    /// Renders a coordinate vector against the basis names.
    pub fn format_vector(&self, v: &[Scalar]) -> String {
        let mut out = String::new();
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let name = &self.basis_names[i];
            let coef = c.to_string();
            let piece = if coef == "1" {
                name.clone()
            } else if coef == "-1" {
                format!("-{name}")
            } else if coef.contains(' ') {
                format!("({coef})*{name}")
            } else {
                format!("{coef}*{name}")
            };
            if out.is_empty() {
                out = piece;
            } else if let Some(rest) = piece.strip_prefix('-') {
                out = format!("{out} - {rest}");
            } else {
                out = format!("{out} + {piece}");
            }
        }
        if out.is_empty() {
            out = "0".to_string();
        }
        out
    }

    // ------------------------------------------------------------------
    // structural checks

    /// Every structure constant must respect the grading: the output degree
    /// equals the sum of the input degrees.
    pub fn check_grading(&self) -> GradingCheck {
        let mut violations = Vec::new();
        for (&(i, j, k), outs) in &self.structure {
            let want = self
                .group
                .add(&self.group.add(&self.degrees[i], &self.degrees[j]), &self.degrees[k]);
            for (l, c) in outs {
                if !c.is_zero() && self.degrees[*l] != want {
                    violations.push((i, j, k, *l));
                }
            }
        }
        GradingCheck { violations }
    }

    /// phi must be invertible, degree-preserving, and a homomorphism of the
    /// triple product.
    pub fn check_automorphism(&self) -> AutomorphismCheck {
        let n = self.dim();
        let invertible = self.phi_inv.is_some();
        let mut even_violations = Vec::new();
        for l in 0..n {
            for i in 0..n {
                if !self.phi.at(l, i).is_zero() && self.degrees[l] != self.degrees[i] {
                    even_violations.push((l, i));
                }
            }
        }
        let mut homomorphism_violations = Vec::new();
        let phi_cols: Vec<Vec<Scalar>> = (0..n).map(|i| self.phi.column(i)).collect();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let lhs = self.phi.apply(&self.bracket_unit(i, j, k));
                    let rhs = self.bracket(&phi_cols[i], &phi_cols[j], &phi_cols[k]);
                    if lhs != rhs {
                        homomorphism_violations.push((i, j, k));
                    }
                }
            }
        }
        AutomorphismCheck {
            invertible,
            even_violations,
            homomorphism_violations,
        }
    }

    /// Checks the defining identity (and the flavor's symmetry laws) over all
    /// basis tuples, which is exhaustive by multilinearity. Records the first
    /// violating tuple per law.
    pub fn check_identity(&self) -> IdentityCheck {
        let laws: &[Law] = match self.flavor {
            Flavor::LeibnizWithAutomorphism => &[Law::Derivation],
            Flavor::HomLeibniz => &[Law::TwistedDerivation],
            Flavor::HomLie3 => &[Law::TwistedDerivation, Law::AntisymFirstPair, Law::AntisymLastPair],
            Flavor::HomLieTriple => &[Law::TwistedDerivation, Law::AntisymFirstPair, Law::CyclicSum],
        };
        let mut violations = Vec::new();
        let mut tuples = 0usize;
        for law in laws {
            let (count, violation) = self.first_law_violation(*law);
            tuples += count;
            if let Some(v) = violation {
                violations.push(v);
            }
        }
        IdentityCheck {
            tuples_checked: tuples,
            violations,
        }
    }

    fn first_law_violation(&self, law: Law) -> (usize, Option<LawViolation>) {
        let n = self.dim();
        let mut count = 0usize;
        match law {
            Law::Derivation | Law::TwistedDerivation => {
                let twisted = matches!(law, Law::TwistedDerivation);
                let phi_cols: Vec<Vec<Scalar>> =
                    (0..n).map(|i| self.phi.column(i)).collect();
                for a in 0..n {
                    for b in 0..n {
                        let dab = self.group.add(&self.degrees[a], &self.degrees[b]);
                        for c in 0..n {
                            let eps_c = self.eps.eval(&dab, &self.degrees[c]);
                            for d in 0..n {
                                let dcd = self.group.add(&self.degrees[c], &self.degrees[d]);
                                let eps_cd = self.eps.eval(&dab, &dcd);
                                for e in 0..n {
                                    count += 1;
                                    let inner = self.bracket_unit(c, d, e);
                                    let (lhs, t1, t2, t3);
                                    if twisted {
                                        lhs = self.bracket(&phi_cols[a], &phi_cols[b], &inner);
                                        t1 = self.bracket(
                                            &self.bracket_unit(a, b, c),
                                            &phi_cols[d],
                                            &phi_cols[e],
                                        );
                                        t2 = self.bracket(
                                            &phi_cols[c],
                                            &self.bracket_unit(a, b, d),
                                            &phi_cols[e],
                                        );
                                        t3 = self.bracket(
                                            &phi_cols[c],
                                            &phi_cols[d],
                                            &self.bracket_unit(a, b, e),
                                        );
                                    } else {
                                        lhs = self.bracket_bbv(a, b, &inner);
                                        t1 = self.bracket_vbb(&self.bracket_unit(a, b, c), d, e);
                                        t2 = self.bracket_bvb(c, &self.bracket_unit(a, b, d), e);
                                        t3 = self.bracket_bbv(c, d, &self.bracket_unit(a, b, e));
                                    }
                                    let mut rhs = t1;
                                    vec_add_scaled(&mut rhs, &eps_c, &t2);
                                    vec_add_scaled(&mut rhs, &eps_cd, &t3);
                                    if lhs != rhs {
                                        return (
                                            count,
                                            Some(LawViolation {
                                                law: law.name(),
                                                tuple: vec![a, b, c, d, e],
                                                lhs,
                                                rhs,
                                            }),
                                        );
                                    }
                                }
                            }
                        }
                    }
                }
            }
            Law::AntisymFirstPair => {
                for a in 0..n {
                    for b in 0..n {
                        let eps = self.eps.eval(&self.degrees[a], &self.degrees[b]);
                        for c in 0..n {
                            count += 1;
                            let lhs = self.bracket_unit(a, b, c);
                            let mut rhs = vec_zero(self.field, n);
                            vec_add_scaled(&mut rhs, &eps.neg(), &self.bracket_unit(b, a, c));
                            if lhs != rhs {
                                return (
                                    count,
                                    Some(LawViolation {
                                        law: law.name(),
                                        tuple: vec![a, b, c],
                                        lhs,
                                        rhs,
                                    }),
                                );
                            }
                        }
                    }
                }
            }
            Law::AntisymLastPair => {
                for a in 0..n {
                    for b in 0..n {
                        for c in 0..n {
                            count += 1;
                            let eps = self.eps.eval(&self.degrees[b], &self.degrees[c]);
                            let lhs = self.bracket_unit(a, b, c);
                            let mut rhs = vec_zero(self.field, n);
                            vec_add_scaled(&mut rhs, &eps.neg(), &self.bracket_unit(a, c, b));
                            if lhs != rhs {
                                return (
                                    count,
                                    Some(LawViolation {
                                        law: law.name(),
                                        tuple: vec![a, b, c],
                                        lhs,
                                        rhs,
                                    }),
                                );
                            }
                        }
                    }
                }
            }
            Law::CyclicSum => {
                for a in 0..n {
                    for b in 0..n {
                        for c in 0..n {
                            count += 1;
                            let mut sum = vec_zero(self.field, n);
                            vec_add_scaled(
                                &mut sum,
                                &self.eps.eval(&self.degrees[c], &self.degrees[a]),
                                &self.bracket_unit(a, b, c),
                            );
                            vec_add_scaled(
                                &mut sum,
                                &self.eps.eval(&self.degrees[a], &self.degrees[b]),
                                &self.bracket_unit(b, c, a),
                            );
                            vec_add_scaled(
                                &mut sum,
                                &self.eps.eval(&self.degrees[b], &self.degrees[c]),
                                &self.bracket_unit(c, a, b),
                            );
                            if !vec_is_zero(&sum) {
                                return (
                                    count,
                                    Some(LawViolation {
                                        law: law.name(),
                                        tuple: vec![a, b, c],
                                        lhs: sum,
                                        rhs: vec_zero(self.field, n),
                                    }),
                                );
                            }
                        }
                    }
                }
            }
        }
        (count, None)
    }

    // ------------------------------------------------------------------
    // flavor transport

    /// Twists the product by phi ([x,y,z]' = phi([x,y,z])), turning a plain
    /// algebra with automorphism into its hom counterpart.
    pub fn homify(&self) -> Result<GradedAlgebra, AlgebraError> {
        if self.flavor != Flavor::LeibnizWithAutomorphism {
            return Err(AlgebraError::WrongFlavor {
                expected: Flavor::LeibnizWithAutomorphism.as_str().to_string(),
                found: self.flavor.as_str().to_string(),
            });
        }
        if !self.check_identity().pass() {
            return Err(AlgebraError::IdentityFailure);
        }
        Ok(self.twisted_by(&self.phi.clone(), Flavor::HomLeibniz))
    }

    /// Twists the product by the inverse of phi, recovering a plain algebra
    /// from any hom flavor. Inverse of `homify` bit for bit.
    pub fn dehomify(&self) -> Result<GradedAlgebra, AlgebraError> {
        if !self.flavor.is_hom() {
            return Err(AlgebraError::WrongFlavor {
                expected: "a hom flavor".to_string(),
                found: self.flavor.as_str().to_string(),
            });
        }
        let phi_inv = self.phi_inv.clone().ok_or(AlgebraError::SingularPhi)?;
        if !self.check_identity().pass() {
            return Err(AlgebraError::IdentityFailure);
        }
        Ok(self.twisted_by(&phi_inv, Flavor::LeibnizWithAutomorphism))
    }

    fn twisted_by(&self, map: &Matrix, flavor: Flavor) -> GradedAlgebra {
        let mut entries = Vec::new();
        for (&(i, j, k), outs) in &self.structure {
            let mut dense = vec_zero(self.field, self.dim());
            for (l, c) in outs {
                dense[*l] = dense[*l].add(c);
            }
            let twisted = map.apply(&dense);
            for (l, c) in twisted.into_iter().enumerate() {
                if !c.is_zero() {
                    entries.push((i, j, k, l, c));
                }
            }
        }
        GradedAlgebra {
            field: self.field,
            group: self.group.clone(),
            eps: self.eps.clone(),
            basis_names: self.basis_names.clone(),
            degrees: self.degrees.clone(),
            structure: structure_from_entries(entries),
            phi: self.phi.clone(),
            phi_inv: self.phi_inv.clone(),
            flavor,
        }
    }

    // ------------------------------------------------------------------
    // ideals

    /// Elements that multiply everything to zero in every slot. The result
    /// is automatically phi-invariant when phi is an automorphism.
    pub fn annihilator(&self) -> Subspace {
        let n = self.dim();
        let mut kernels = Vec::new();
        for slot in 0..3 {
            let mut m = Matrix::zero(self.field, n * n * n, n);
            for (&(i, j, k), outs) in &self.structure {
                let (row_a, row_b, col) = match slot {
                    0 => (j, k, i),
                    1 => (i, k, j),
                    _ => (i, j, k),
                };
                for (l, c) in outs {
                    let r = (row_a * n + row_b) * n + l;
                    let cur = m.at(r, col).add(c);
                    *m.at_mut(r, col) = cur;
                }
            }
            kernels.push(m.kernel());
        }
        let mut acc = kernels[0].clone();
        for k in &kernels[1..] {
            acc = acc.intersect(k);
        }
        acc
    }

    /// Least subspace containing the seed that is closed under phi (both
    /// ways) and under products with the whole algebra in every slot.
    pub fn ideal_closure(&self, seed: &Subspace) -> Subspace {
        let full = Subspace::full(self.field, self.dim());
        let mut cur = Subspace::from_matrix_rows(seed.basis());
        loop {
            let mut next = cur.clone();
            next = next.sum(&cur.image_under(&self.phi));
            if let Some(pi) = &self.phi_inv {
                next = next.sum(&cur.image_under(pi));
            }
            next = next.sum(&self.triple_span(&cur, &full, &full));
            next = next.sum(&self.triple_span(&full, &cur, &full));
            next = next.sum(&self.triple_span(&full, &full, &cur));
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    /// True when the subspace absorbs products in every slot and is carried
    /// onto itself by phi.
    pub fn is_ideal(&self, s: &Subspace) -> bool {
        let full = Subspace::full(self.field, self.dim());
        s.contains(&self.triple_span(s, &full, &full))
            && s.contains(&self.triple_span(&full, s, &full))
            && s.contains(&self.triple_span(&full, &full, s))
            && s.image_under(&self.phi) == *s
    }

    /// The closed ideal generated by all antisymmetry defects in the first
    /// and last argument pairs. It vanishes exactly when both antisymmetry
    /// laws hold.
    pub fn antisymmetrizer_ideal(&self) -> Subspace {
        let n = self.dim();
        let mut rows = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut first = self.bracket_unit(i, j, k);
                    vec_add_scaled(
                        &mut first,
                        &self.eps.eval(&self.degrees[i], &self.degrees[j]),
                        &self.bracket_unit(j, i, k),
                    );
                    if !vec_is_zero(&first) {
                        rows.push(first);
                    }
                    let mut last = self.bracket_unit(i, j, k);
                    vec_add_scaled(
                        &mut last,
                        &self.eps.eval(&self.degrees[j], &self.degrees[k]),
                        &self.bracket_unit(i, k, j),
                    );
                    if !vec_is_zero(&last) {
                        rows.push(last);
                    }
                }
            }
        }
        self.ideal_closure(&Subspace::from_rows(self.field, n, rows))
    }

    /// Saturates the lattice of ideals generated by closures of the basis
    /// vectors under pairwise sums, then asks whether every member is 0, the
    /// antisymmetrizer ideal, or the whole algebra. Basis-vector seeds are a
    /// deliberate limitation: an ideal avoiding every coordinate line would
    /// not be seen, so a "simple" verdict is relative to this lattice.
    pub fn is_simple(&self, node_budget: usize) -> Result<SimplicityReport, AlgebraError> {
        if self.bracket_is_zero() {
            return Err(AlgebraError::ZeroProduct);
        }
        let n = self.dim();
        let j_ideal = self.antisymmetrizer_ideal();
        let full = Subspace::full(self.field, n);
        let is_trivial =
            |s: &Subspace| s.is_zero() || *s == j_ideal || *s == full;
        let mut members: Vec<Subspace> = Vec::new();
        let mut seen: std::collections::BTreeSet<Subspace> = std::collections::BTreeSet::new();
        let mut explored = 0usize;
        let mut witness: Option<Subspace> = None;
        {
            let push = |s: Subspace,
                            members: &mut Vec<Subspace>,
                            seen: &mut std::collections::BTreeSet<Subspace>,
                            explored: &mut usize|
             -> Option<Subspace> {
                if seen.insert(s.clone()) {
                    *explored += 1;
                    if !is_trivial(&s) {
                        return Some(s);
                    }
                    members.push(s);
                }
                None
            };
            'outer: {
                for i in 0..n {
                    let seed = Subspace::from_rows(
                        self.field,
                        n,
                        vec![unit_vector(self.field, n, i)],
                    );
                    let closed = self.ideal_closure(&seed);
                    if explored >= node_budget {
                        return Ok(SimplicityReport {
                            verdict: SimplicityVerdict::Inconclusive { explored },
                            antisym_ideal_dim: j_ideal.dim(),
                        });
                    }
                    if let Some(w) = push(closed, &mut members, &mut seen, &mut explored) {
                        witness = Some(w);
                        break 'outer;
                    }
                }
                let mut idx = 0;
                while idx < members.len() {
                    for jdx in 0..idx {
                        let sum = members[idx].sum(&members[jdx]);
                        if explored >= node_budget {
                            return Ok(SimplicityReport {
                                verdict: SimplicityVerdict::Inconclusive { explored },
                                antisym_ideal_dim: j_ideal.dim(),
                            });
                        }
                        if let Some(w) = push(sum, &mut members, &mut seen, &mut explored) {
                            witness = Some(w);
                            break 'outer;
                        }
                    }
                    idx += 1;
                }
            }
        }
        let verdict = match witness {
            Some(w) => SimplicityVerdict::NotSimple { witness: w },
            None => SimplicityVerdict::Simple,
        };
        Ok(SimplicityReport {
            verdict,
            antisym_ideal_dim: j_ideal.dim(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Law {
    Derivation,
    TwistedDerivation,
    AntisymFirstPair,
    AntisymLastPair,
    CyclicSum,
}

impl Law {
    fn name(self) -> String {
        match self {
            Law::Derivation => "derivation identity",
            Law::TwistedDerivation => "twisted derivation identity",
            Law::AntisymFirstPair => "antisymmetry in the first two slots",
            Law::AntisymLastPair => "antisymmetry in the last two slots",
            Law::CyclicSum => "cyclic sum",
        }
        .to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradingCheck {
    /// (i, j, k, l) entries whose output degree mismatches the input sum.
    pub violations: Vec<(usize, usize, usize, usize)>,
}

impl GradingCheck {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomorphismCheck {
    pub invertible: bool,
    /// (l, i) pairs where phi maps across degrees.
    pub even_violations: Vec<(usize, usize)>,
    /// basis triples where phi fails to preserve the product.
    pub homomorphism_violations: Vec<(usize, usize, usize)>,
}

impl AutomorphismCheck {
    pub fn pass(&self) -> bool {
        self.invertible && self.even_violations.is_empty() && self.homomorphism_violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawViolation {
    pub law: String,
    pub tuple: Vec<usize>,
    pub lhs: Vec<Scalar>,
    pub rhs: Vec<Scalar>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub tuples_checked: usize,
    /// At most one violation per law: the lexicographically first tuple.
    pub violations: Vec<LawViolation>,
}

impl IdentityCheck {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimplicityVerdict {
    Simple,
    NotSimple { witness: Subspace },
    Inconclusive { explored: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicityReport {
    pub verdict: SimplicityVerdict,
    pub antisym_ideal_dim: usize,
}

pub const DEFAULT_NODE_BUDGET: usize = 10_000;
