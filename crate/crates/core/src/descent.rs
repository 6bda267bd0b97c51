//! How the module decomposition descends to the operator algebra, and the
//! reverse construction of a triple system from a binary color algebra.
//!
//! Each connection class contributes the span of the adjoint operators it
//! touches. Those spans partition the operator root system, are ideals of
//! the operator algebra, commute pairwise, and annihilate the modules of
//! other classes. Everything is certified by exact computation against the
//! decomposition produced upstream.

use crate::algebra::{structure_from_entries, Flavor, GradedAlgebra};
use crate::connect::Decomposition;
use crate::envelope::{build_mult_algebra, Envelope, MultAlgebra};
use crate::field::{FieldSpec, Scalar};
use crate::grading::{Bicharacter, GradingGroup, GroupElement};
use crate::linalg::{
    canonical_complement, unit_vector, vec_add, vec_is_zero, vec_scale, vec_zero, Matrix,
    Subspace,
};
use crate::roots::{PropertyResult, RootDecomposition, RootFunctional};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use thiserror::Error;

/// Span of the adjoint operators with at least one slot in the module, in
/// operator coordinates.
pub fn ad_class_image(a: &GradedAlgebra, mult: &MultAlgebra, module: &Subspace) -> Subspace {
    let spec = a.field();
    let n = a.dim();
    let mut rows = Vec::new();
    for x in module.basis_rows() {
        for j in 0..n {
            let unit = unit_vector(spec, n, j);
            for op in [a.ad_operator(x, &unit), a.ad_operator(&unit, x)] {
                if op.is_zero() {
                    continue;
                }
                let coords = mult
                    .coords_of(&op)
                    .expect("adjoint operators lie in the operator algebra by construction");
                rows.push(coords);
            }
        }
    }
    Subspace::from_rows(spec, mult.dim(), rows)
}

/// The operator-algebra shadow of a module decomposition.
#[derive(Debug, Clone)]
pub struct DescentReport {
    pub classes: Vec<Vec<RootFunctional>>,
    /// span of the adjoint operators of each class, in operator coordinates
    pub ad_images: Vec<Subspace>,
    /// operator roots attached to each class
    pub l_class_roots: Vec<Vec<RootFunctional>>,
    pub complement_u_prime: Subspace,
    pub certificates: Vec<PropertyResult>,
}

impl DescentReport {
    pub fn all_pass(&self) -> bool {
        self.certificates.iter().all(|c| c.pass())
    }
}

/// Certified descent of a module decomposition to the operator algebra.
pub fn descend(
    a: &GradedAlgebra,
    env: &Envelope,
    d: &RootDecomposition,
    dec: &Decomposition,
) -> DescentReport {
    let mult = env.mult();
    let spec = a.field();
    let m = mult.dim();
    let classes = dec.classes.clone();
    let ad_images: Vec<Subspace> = dec
        .ideals
        .iter()
        .map(|ideal| ad_class_image(a, mult, &ideal.total))
        .collect();
    let mut certificates = Vec::new();

    // operator roots seen from the images, by nontrivial intersection
    let lambda_l = d.lambda_l();
    let by_intersection: Vec<BTreeSet<RootFunctional>> = ad_images
        .iter()
        .map(|im| {
            lambda_l
                .iter()
                .filter(|g| !d.l_space(g).intersect(im).is_zero())
                .cloned()
                .collect()
        })
        .collect();

    // the same sets computed from sums of class roots with a nonzero
    // adjoint span
    let mut by_sums: Vec<BTreeSet<RootFunctional>> = Vec::new();
    for cls in &classes {
        let mut pool = vec![d.zero_functional()];
        pool.extend(cls.iter().cloned());
        let mut set = BTreeSet::new();
        for x in &pool {
            for y in &pool {
                let s = x.add(y);
                if s.is_zero() || set.contains(&s) {
                    continue;
                }
                let sx = d.t_space(x);
                let sy = d.t_space(y);
                let mut nonzero = false;
                'pairs: for u in sx.basis_rows() {
                    for v in sy.basis_rows() {
                        if !a.ad_operator(u, v).is_zero() || !a.ad_operator(v, u).is_zero() {
                            nonzero = true;
                            break 'pairs;
                        }
                    }
                }
                if nonzero {
                    set.insert(s);
                }
            }
        }
        by_sums.push(set);
    }
    certificates.push(PropertyResult {
        name: "the two descriptions of class operator roots agree".into(),
        violation: (by_intersection != by_sums).then(|| {
            "intersection and sum descriptions disagree for some class".to_string()
        }),
    });
    let l_class_roots: Vec<Vec<RootFunctional>> = by_intersection
        .iter()
        .map(|s| s.iter().cloned().collect())
        .collect();

    // the class root sets partition the operator root system
    let mut violation = None;
    let mut seen: BTreeMap<&RootFunctional, usize> = BTreeMap::new();
    for (i, set) in by_intersection.iter().enumerate() {
        for g in set {
            if let Some(j) = seen.insert(g, i) {
                violation = Some(format!("operator root {g} lies in classes {j} and {i}"));
            }
        }
    }
    if violation.is_none() {
        for g in &lambda_l {
            if !seen.contains_key(g) {
                violation = Some(format!("operator root {g} belongs to no class"));
                break;
            }
        }
    }
    certificates.push(PropertyResult {
        name: "operator roots split across the classes without overlap".into(),
        violation,
    });

    // each image is the direct sum of its zero part and the full root
    // spaces it meets
    let mut violation = None;
    for (i, im) in ad_images.iter().enumerate() {
        let zero_part = im.intersect(d.l_zero());
        let mut rebuilt = zero_part.clone();
        let mut dim_sum = zero_part.dim();
        for g in &l_class_roots[i] {
            let space = d.l_space(g);
            if !im.contains(&space) {
                violation = Some(format!(
                    "operator root space of {g} leaks out of the image of class {i}"
                ));
                break;
            }
            rebuilt = rebuilt.sum(&space);
            dim_sum += space.dim();
        }
        if violation.is_some() {
            break;
        }
        if rebuilt != *im || dim_sum != im.dim() {
            violation = Some(format!("image of class {i} is not the direct sum of its parts"));
            break;
        }
    }
    certificates.push(PropertyResult {
        name: "class operator root spaces fill the class images exactly".into(),
        violation,
    });

    // images are ideals, stable under the conjugation transport
    let mut violation = None;
    'ideals: for (i, im) in ad_images.iter().enumerate() {
        let moved = im.image_under(mult.phi_op());
        if moved != *im {
            violation = Some(format!("image of class {i} moves under the transport"));
            break;
        }
        for p in 0..m {
            let unit = unit_vector(spec, m, p);
            for r in im.basis_rows() {
                for c in [mult.bracket_coords(&unit, r), mult.bracket_coords(r, &unit)] {
                    if !im.contains_vector(&c) {
                        violation = Some(format!(
                            "bracket with a basis operator escapes the image of class {i}"
                        ));
                        break 'ideals;
                    }
                }
            }
        }
    }
    certificates.push(PropertyResult {
        name: "class images are transport-stable ideals of the operator algebra".into(),
        violation,
    });

    // images of different classes commute
    let mut violation = None;
    'commute: for i in 0..ad_images.len() {
        for j in (i + 1)..ad_images.len() {
            for x in ad_images[i].basis_rows() {
                for y in ad_images[j].basis_rows() {
                    if !vec_is_zero(&mult.bracket_coords(x, y)) {
                        violation = Some(format!("images of classes {i} and {j} do not commute"));
                        break 'commute;
                    }
                }
            }
        }
    }
    certificates.push(PropertyResult {
        name: "images of different classes commute".into(),
        violation,
    });

    // a complement inside the zero part completes the operator algebra
    let mut sum_ad = Subspace::zero(spec, m);
    for im in &ad_images {
        sum_ad = sum_ad.sum(im);
    }
    let interior = sum_ad.intersect(d.l_zero());
    let complement_u_prime = canonical_complement(d.l_zero(), &interior);
    let filled = sum_ad.sum(&complement_u_prime);
    certificates.push(PropertyResult {
        name: "class images and the zero-part complement span the operator algebra".into(),
        violation: (filled != Subspace::full(spec, m)).then(|| {
            format!("span has dimension {} of {m}", filled.dim())
        }),
    });

    // operators of one class annihilate the modules of the others
    let mut violation = None;
    'annihilate: for (i, im) in ad_images.iter().enumerate() {
        for (j, ideal) in dec.ideals.iter().enumerate() {
            if i == j {
                continue;
            }
            for l in im.basis_rows() {
                let action = env.even_action_matrix(l);
                if !ideal.total.image_under(&action).is_zero() {
                    violation = Some(format!(
                        "operators of class {i} act nontrivially on the module of class {j}"
                    ));
                    break 'annihilate;
                }
            }
        }
    }
    certificates.push(PropertyResult {
        name: "class operators annihilate the modules of other classes".into(),
        violation,
    });

    DescentReport {
        classes,
        ad_images,
        l_class_roots,
        complement_u_prime,
        certificates,
    }
}

/// Diagnostic: whether every pair of operator roots whose sum is a root or
/// zero has a nonzero bracket. Returns the failing pairs.
pub fn root_multiplicativity(
    mult: &MultAlgebra,
    d: &RootDecomposition,
) -> (bool, Vec<(RootFunctional, RootFunctional)>) {
    let mut witnesses = Vec::new();
    let roots = d.lambda_l();
    for x in &roots {
        for y in &roots {
            let s = x.add(y);
            if !s.is_zero() && !d.is_l_root(&s) {
                continue;
            }
            let sx = d.l_space(x);
            let sy = d.l_space(y);
            let mut nonzero = false;
            'pairs: for u in sx.basis_rows() {
                for v in sy.basis_rows() {
                    if !vec_is_zero(&mult.bracket_coords(u, v)) {
                        nonzero = true;
                        break 'pairs;
                    }
                }
            }
            if !nonzero {
                witnesses.push((x.clone(), y.clone()));
            }
        }
    }
    (witnesses.is_empty(), witnesses)
}

/// Whether the transport maps the operator root system onto itself, the
/// precondition for chain searches inside it.
pub fn l_transport_permutes(d: &RootDecomposition) -> bool {
    d.lambda_l()
        .iter()
        .all(|f| d.is_l_root(&d.root_after_phi(f)))
}

/// Chain search inside the operator root system alone: entries are operator
/// roots, every partial sum stays an operator root, and the final sum is a
/// signed transport image of the target. Returns the entry list.
pub fn intrinsic_l_connected(
    d: &RootDecomposition,
    gamma: &RootFunctional,
    delta: &RootFunctional,
) -> Option<Vec<RootFunctional>> {
    assert!(
        d.is_l_root(gamma) && d.is_l_root(delta),
        "intrinsic connectivity is defined on operator roots"
    );
    assert!(
        l_transport_permutes(d),
        "transport must permute the operator root system"
    );
    let mut targets = BTreeSet::new();
    for g in d.phi_orbit(delta) {
        targets.insert(g.neg());
        targets.insert(g);
    }
    if targets.contains(gamma) {
        return Some(vec![gamma.clone()]);
    }
    let roots = d.lambda_l();
    let mut parent: BTreeMap<RootFunctional, (RootFunctional, RootFunctional)> = BTreeMap::new();
    let mut seen = BTreeSet::new();
    seen.insert(gamma.clone());
    let mut queue = VecDeque::from([gamma.clone()]);
    while let Some(state) = queue.pop_front() {
        for e in &roots {
            let next = state.add(e);
            if !d.is_l_root(&next) || !seen.insert(next.clone()) {
                continue;
            }
            parent.insert(next.clone(), (state.clone(), e.clone()));
            if targets.contains(&next) {
                let mut rev = Vec::new();
                let mut cur = next;
                while let Some((prev, entry)) = parent.get(&cur) {
                    rev.push(entry.clone());
                    cur = prev.clone();
                }
                let mut chain = vec![gamma.clone()];
                chain.extend(rev.into_iter().rev());
                return Some(chain);
            }
            queue.push_back(next);
        }
    }
    None
}

/// Partition of the operator root system under the symmetric-transitive
/// closure of intrinsic connectivity.
pub fn intrinsic_l_classes(d: &RootDecomposition) -> Vec<Vec<RootFunctional>> {
    let roots = d.lambda_l();
    let mut repr: Vec<usize> = (0..roots.len()).collect();
    fn find(repr: &mut Vec<usize>, i: usize) -> usize {
        if repr[i] != i {
            let r = find(repr, repr[i]);
            repr[i] = r;
        }
        repr[i]
    }
    for i in 0..roots.len() {
        for j in (i + 1)..roots.len() {
            if intrinsic_l_connected(d, &roots[i], &roots[j]).is_some() {
                let (a, b) = (find(&mut repr, i), find(&mut repr, j));
                repr[a.max(b)] = a.min(b);
            }
        }
    }
    let mut buckets: BTreeMap<usize, Vec<RootFunctional>> = BTreeMap::new();
    for i in 0..roots.len() {
        let r = find(&mut repr, i);
        buckets.entry(r).or_default().push(roots[i].clone());
    }
    buckets.into_values().collect()
}

/// Whether every class of the first partition sits inside one class of the
/// second, and whether the two partitions coincide.
pub fn partition_refines(
    finer: &[Vec<RootFunctional>],
    coarser: &[Vec<RootFunctional>],
) -> (bool, bool) {
    let normalize = |p: &[Vec<RootFunctional>]| -> BTreeSet<BTreeSet<RootFunctional>> {
        p.iter()
            .filter(|c| !c.is_empty())
            .map(|c| c.iter().cloned().collect())
            .collect()
    };
    let f = normalize(finer);
    let c = normalize(coarser);
    let refines = f
        .iter()
        .all(|cls| c.iter().any(|big| cls.is_subset(big)));
    (refines, f == c)
}

// ----------------------------------------------------------------------
// reconstruction from a binary color algebra

pub type BinaryStructure = BTreeMap<(usize, usize), Vec<(usize, Scalar)>>;

/// Merges duplicate slots and drops zero coefficients, like the ternary
/// normalizer.
pub fn binary_structure_from_entries(
    entries: Vec<(usize, usize, usize, Scalar)>,
) -> BinaryStructure {
    let mut merged: BTreeMap<(usize, usize), BTreeMap<usize, Scalar>> = BTreeMap::new();
    for (i, j, l, c) in entries {
        if c.is_zero() {
            continue;
        }
        let slot = merged.entry((i, j)).or_default();
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

/// A graded binary algebra with a designated invertible map, the raw
/// material for building a triple system.
#[derive(Debug, Clone)]
pub struct BinaryColorAlgebra {
    pub field: FieldSpec,
    pub group: GradingGroup,
    pub eps: Bicharacter,
    pub basis_names: Vec<String>,
    pub degrees: Vec<GroupElement>,
    pub structure: BinaryStructure,
    pub phi: Matrix,
}

impl BinaryColorAlgebra {
    pub fn dim(&self) -> usize {
        self.basis_names.len()
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Scalar> {
        let mut out = vec_zero(self.field, self.dim());
        if let Some(outs) = self.structure.get(&(i, j)) {
            for (l, c) in outs {
                out[*l] = out[*l].add(c);
            }
        }
        out
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec_zero(self.field, self.dim());
        for (&(i, j), outs) in &self.structure {
            if x[i].is_zero() || y[j].is_zero() {
                continue;
            }
            let coeff = x[i].mul(&y[j]);
            for (l, c) in outs {
                out[*l] = out[*l].add(&coeff.mul(c));
            }
        }
        out
    }

    /// Left multiplication as a matrix (columns convention).
    fn ad_matrix(&self, x: &[Scalar]) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zero(self.field, n, n);
        for j in 0..n {
            let col = self.bracket(x, &unit_vector(self.field, n, j));
            for (i, v) in col.into_iter().enumerate() {
                *m.at_mut(i, j) = v;
            }
        }
        m
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReconstructError {
    #[error("the binary algebra is not perfect: brackets span dimension {dim}")]
    NotPerfect { dim: usize },
    #[error("binary algebra axiom fails: {detail}")]
    BinaryAxiomFailure { detail: String },
    #[error("the designated automorphism is singular")]
    SingularPhi,
}

/// A reconstructed triple system with its post-construction certificates.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub algebra: GradedAlgebra,
    pub certificates: Vec<PropertyResult>,
}

impl Reconstruction {
    pub fn all_pass(&self) -> bool {
        self.certificates.iter().all(|c| c.pass())
    }
}

/// Builds the triple system with product "bracket twice" from a perfect
/// binary color algebra with automorphism, after validating the binary
/// axioms exactly.
pub fn reconstruct_from_lie(b: &BinaryColorAlgebra) -> Result<Reconstruction, ReconstructError> {
    let n = b.dim();
    let spec = b.field;
    assert_eq!(b.degrees.len(), n);
    assert_eq!((b.phi.rows(), b.phi.cols()), (n, n));
    for (&(i, j), outs) in &b.structure {
        assert!(i < n && j < n && outs.iter().all(|(l, _)| *l < n));
    }
    let phi_inv = b.phi.inverse().ok_or(ReconstructError::SingularPhi)?;
    let _ = phi_inv;

    // outputs live in the degree of the pair
    for (&(i, j), outs) in &b.structure {
        let want = b.group.add(&b.degrees[i], &b.degrees[j]);
        for (l, _) in outs {
            if b.degrees[*l] != want {
                return Err(ReconstructError::BinaryAxiomFailure {
                    detail: format!("bracket of {i} and {j} has a component off its degree"),
                });
            }
        }
    }

    // color antisymmetry on basis pairs
    for i in 0..n {
        for j in 0..n {
            let forward = b.bracket_basis(i, j);
            let sign = b.eps.eval(&b.degrees[i], &b.degrees[j]);
            let back = vec_scale(&sign, &b.bracket_basis(j, i));
            if !vec_is_zero(&vec_add(&forward, &back)) {
                return Err(ReconstructError::BinaryAxiomFailure {
                    detail: format!("brackets of {i} and {j} are not color-antisymmetric"),
                });
            }
        }
    }

    // color derivation rule on basis triples
    for i in 0..n {
        for j in 0..n {
            let sign = b.eps.eval(&b.degrees[i], &b.degrees[j]);
            for k in 0..n {
                let x = unit_vector(spec, n, i);
                let y = unit_vector(spec, n, j);
                let z = unit_vector(spec, n, k);
                let lhs = b.bracket(&x, &b.bracket(&y, &z));
                let rhs = vec_add(
                    &b.bracket(&b.bracket(&x, &y), &z),
                    &vec_scale(&sign, &b.bracket(&y, &b.bracket(&x, &z))),
                );
                if lhs != rhs {
                    return Err(ReconstructError::BinaryAxiomFailure {
                        detail: format!("derivation rule fails on the triple ({i}, {j}, {k})"),
                    });
                }
            }
        }
    }

    // the designated map respects the bracket
    for i in 0..n {
        for j in 0..n {
            let lhs = b.bracket(
                &b.phi.apply(&unit_vector(spec, n, i)),
                &b.phi.apply(&unit_vector(spec, n, j)),
            );
            let rhs = b.phi.apply(&b.bracket_basis(i, j));
            if lhs != rhs {
                return Err(ReconstructError::BinaryAxiomFailure {
                    detail: format!("the designated map breaks the bracket of {i} and {j}"),
                });
            }
        }
    }

    // perfectness: brackets span everything
    let mut rows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let w = b.bracket_basis(i, j);
            if !vec_is_zero(&w) {
                rows.push(w);
            }
        }
    }
    let span = Subspace::from_rows(spec, n, rows);
    if span.dim() != n {
        return Err(ReconstructError::NotPerfect { dim: span.dim() });
    }

    // triple product: bracket the pair, then bracket with the third slot
    let mut entries = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let w = b.bracket_basis(i, j);
            if vec_is_zero(&w) {
                continue;
            }
            for k in 0..n {
                let out = b.bracket(&w, &unit_vector(spec, n, k));
                for (l, c) in out.into_iter().enumerate() {
                    if !c.is_zero() {
                        entries.push((i, j, k, l, c));
                    }
                }
            }
        }
    }
    let algebra = GradedAlgebra::new(
        spec,
        b.group.clone(),
        b.eps.clone(),
        b.basis_names.clone(),
        b.degrees.clone(),
        structure_from_entries(entries),
        b.phi.clone(),
        Flavor::LeibnizWithAutomorphism,
    );

    let mut certificates = Vec::new();
    let identity = algebra.check_identity();
    certificates.push(PropertyResult {
        name: "the reconstructed triple product satisfies the derivation identity".into(),
        violation: identity.violations.first().map(|v| {
            format!("law {} fails on tuple {:?}", v.law, v.tuple)
        }),
    });
    let automorphism = algebra.check_automorphism();
    certificates.push(PropertyResult {
        name: "the designated map is an automorphism of the triple product".into(),
        violation: (!automorphism.pass()).then(|| "automorphism check failed".to_string()),
    });
    certificates.push(PropertyResult {
        name: "the multiplication algebra agrees with the binary adjoint image".into(),
        violation: match build_mult_algebra(&algebra) {
            Ok(mult) => {
                let nn = n * n;
                let op_span = Subspace::from_rows(
                    spec,
                    nn,
                    mult.ops().iter().map(|m| m.flatten()).collect(),
                );
                let ad_span = Subspace::from_rows(
                    spec,
                    nn,
                    (0..n)
                        .map(|i| b.ad_matrix(&unit_vector(spec, n, i)).flatten())
                        .collect(),
                );
                (op_span != ad_span).then(|| {
                    "the operator span differs from the binary adjoint span".to_string()
                })
            }
            Err(e) => Some(format!("operator algebra construction failed: {e}")),
        },
    });

    Ok(Reconstruction {
        algebra,
        certificates,
    })
}
