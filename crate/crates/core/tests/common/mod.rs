//! Naive reference computations for the acceptance run. Everything here
//! recomputes its target from the raw structure tensor with plain loops,
//! deliberately avoiding the library's incremental or cached routines.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use split3::algebra::GradedAlgebra;
use split3::envelope::{build_envelope, Envelope};
use split3::field::Scalar;
use split3::fixtures;
use split3::io::{InputDoc, MasaEntry};
use split3::linalg::{vec_is_zero, Matrix, Subspace};
use split3::roots::{decompose_roots, Masa, RootDecomposition, RootFunctional};

pub fn load(name: &str) -> InputDoc {
    fixtures::load(name)
}

/// Resolves a record's operator family against its own envelope.
pub fn masa_of(doc: &InputDoc, a: &GradedAlgebra, env: &Envelope) -> Masa {
    let entries = doc.masa.as_deref().unwrap_or(&[]);
    let elements: Vec<Vec<Scalar>> = entries
        .iter()
        .map(|e| match e {
            MasaEntry::AdPair(i, j) => env
                .mult()
                .coords_of(&a.ad_basis(*i, *j))
                .expect("pair lies in the operator algebra"),
            MasaEntry::OpCoords(v) => v.clone(),
        })
        .collect();
    let hints = doc.hints.for_family(elements.len());
    Masa::with_hints(elements, hints)
}

/// Builds algebra, envelope and root data for a bundled ternary record.
pub fn prepared(name: &str) -> (GradedAlgebra, Envelope, RootDecomposition) {
    let doc = load(name);
    let a = doc.ternary().expect("ternary record").clone();
    let env = build_envelope(&a).expect("envelope builds");
    let masa = masa_of(&doc, &a, &env);
    let d = decompose_roots(&a, &env, &masa).expect("family splits");
    (a, env, d)
}

/// First tuple violating the derivation law, recomputed with full-vector
/// brackets and nothing else. Twisted flavors get the map spliced in.
pub fn naive_identity_violation(a: &GradedAlgebra) -> Option<[usize; 5]> {
    let n = a.dim();
    let spec = a.field();
    let twisted = a.flavor().is_hom();
    let unit = |i: usize| {
        let mut v = vec![spec.zero(); n];
        v[i] = spec.one();
        v
    };
    let phi = |i: usize| a.apply_phi(&unit(i));
    for p in 0..n {
        for q in 0..n {
            let dpq = a.group().add(a.deg(p), a.deg(q));
            for c in 0..n {
                let eps_c = a.eps(&dpq, a.deg(c));
                for d in 0..n {
                    let dcd = a.group().add(a.deg(c), a.deg(d));
                    let eps_cd = a.eps(&dpq, &dcd);
                    for e in 0..n {
                        let inner = a.bracket(&unit(c), &unit(d), &unit(e));
                        let (lhs, t1, t2, t3) = if twisted {
                            (
                                a.bracket(&phi(p), &phi(q), &inner),
                                a.bracket(&a.bracket(&unit(p), &unit(q), &unit(c)), &phi(d), &phi(e)),
                                a.bracket(&phi(c), &a.bracket(&unit(p), &unit(q), &unit(d)), &phi(e)),
                                a.bracket(&phi(c), &phi(d), &a.bracket(&unit(p), &unit(q), &unit(e))),
                            )
                        } else {
                            (
                                a.bracket(&unit(p), &unit(q), &inner),
                                a.bracket(&a.bracket(&unit(p), &unit(q), &unit(c)), &unit(d), &unit(e)),
                                a.bracket(&unit(c), &a.bracket(&unit(p), &unit(q), &unit(d)), &unit(e)),
                                a.bracket(&unit(c), &unit(d), &a.bracket(&unit(p), &unit(q), &unit(e))),
                            )
                        };
                        let mut rhs = t1;
                        for (s, t) in rhs.iter_mut().zip(&t2) {
                            *s = s.add(&eps_c.mul(t));
                        }
                        for (s, t) in rhs.iter_mut().zip(&t3) {
                            *s = s.add(&eps_cd.mul(t));
                        }
                        if lhs != rhs {
                            return Some([p, q, c, d, e]);
                        }
                    }
                }
            }
        }
    }
    None
}

/// Products of all basis triples, carried through the inverse twist for
/// hom flavors (the working bracket of the connection machinery).
pub fn product_rows(a: &GradedAlgebra, x: &Subspace, y: &Subspace, z: &Subspace) -> Vec<Vec<Scalar>> {
    let twist: Option<Matrix> = if a.flavor().is_hom() {
        Some(a.phi_inv().expect("hom flavor carries an inverse").clone())
    } else {
        None
    };
    let mut rows = Vec::new();
    for u in x.basis_rows() {
        for v in y.basis_rows() {
            for w in z.basis_rows() {
                let mut p = a.bracket(u, v, w);
                if let Some(m) = &twist {
                    p = m.apply(&p);
                }
                if !vec_is_zero(&p) {
                    rows.push(p);
                }
            }
        }
    }
    rows
}

fn span(a: &GradedAlgebra, rows: Vec<Vec<Scalar>>) -> Subspace {
    Subspace::from_rows(a.field(), a.dim(), rows)
}

/// Interior space of a root by saturation: seed with the two-sided root
/// products into the zero space, then keep absorbing zero-slot products of
/// the whole accumulated span until nothing new shows up.
pub fn naive_t0_alpha(a: &GradedAlgebra, d: &RootDecomposition, alpha: &RootFunctional) -> Subspace {
    let t0 = d.t_zero();
    let mut acc = span(
        a,
        product_rows(a, &d.t_space(alpha), &d.t_space(&alpha.neg()), t0),
    );
    for _ in 0..=a.dim() {
        let grown = acc.sum(&span(a, product_rows(a, &acc, t0, t0)));
        if grown == acc {
            break;
        }
        acc = grown;
    }
    acc
}

fn six_arrangements<'s>(
    x: &'s Subspace,
    y: &'s Subspace,
    z: &'s Subspace,
) -> [(&'s Subspace, &'s Subspace, &'s Subspace); 6] {
    [
        (x, y, z),
        (x, z, y),
        (y, x, z),
        (y, z, x),
        (z, x, y),
        (z, y, x),
    ]
}

/// Symmetrized pair space, written out as the plain sum over every sign,
/// order and slot arrangement the definition quantifies over.
pub fn naive_t_alpha_beta(
    a: &GradedAlgebra,
    d: &RootDecomposition,
    alpha: &RootFunctional,
    beta: &RootFunctional,
    wide: bool,
) -> Subspace {
    let t0 = d.t_zero().clone();
    let mut acc = Subspace::zero(a.field(), a.dim());
    for (u, v) in [(alpha, beta), (beta, alpha)] {
        for su in [u.clone(), u.neg()] {
            for tv in [v.clone(), v.neg()] {
                let root_u = d.t_space(&su);
                let root_u_neg = d.t_space(&su.neg());
                let root_v = d.t_space(&tv);
                if wide {
                    for (x, y, z) in six_arrangements(&root_u, &root_u_neg, &root_v) {
                        acc = acc.sum(&span(a, product_rows(a, x, y, z)));
                    }
                } else {
                    acc = acc.sum(&span(a, product_rows(a, &root_u, &root_u_neg, &root_v)));
                }
                let int_u = naive_t0_alpha(a, d, &su);
                let int_v = naive_t0_alpha(a, d, &tv);
                for other in [root_v.clone(), int_v.clone()] {
                    for (x, y, z) in six_arrangements(&int_u, &other, &t0) {
                        acc = acc.sum(&span(a, product_rows(a, x, y, z)));
                    }
                }
            }
        }
    }
    acc
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
enum ChainState {
    Root(RootFunctional),
    Theta(RootFunctional),
}

/// The signed transport targets a chain may land on.
fn targets(d: &RootDecomposition, beta: &RootFunctional) -> BTreeSet<RootFunctional> {
    let mut out = BTreeSet::new();
    for g in d.phi_orbit(beta) {
        out.insert(g.neg());
        out.insert(g);
    }
    out
}

/// Theta resolution: the pair space must be nonzero somewhere along the
/// joint transport orbit of the absorbed root and the new entry.
fn naive_theta_absorbs(
    a: &GradedAlgebra,
    d: &RootDecomposition,
    wide: bool,
    alpha: &RootFunctional,
    beta: &RootFunctional,
) -> bool {
    let mut seen = BTreeSet::new();
    let mut pair = (alpha.clone(), beta.clone());
    while seen.insert(pair.clone()) {
        if !d.is_t_root(&pair.0) || !d.is_t_root(&pair.1) {
            break;
        }
        if !naive_t_alpha_beta(a, d, &pair.0, &pair.1, wide).is_zero() {
            return true;
        }
        pair = (d.root_after_phi(&pair.0), d.root_after_phi(&pair.1));
    }
    false
}

/// Connectivity by breadth-first enumeration of chains, entries drawn from
/// the nonzero roots and zero, at most `max_pairs` entry pairs deep.
pub fn naive_connected(
    a: &GradedAlgebra,
    d: &RootDecomposition,
    wide: bool,
    alpha: &RootFunctional,
    beta: &RootFunctional,
    max_pairs: usize,
) -> bool {
    let goal = targets(d, beta);
    if goal.contains(alpha) {
        return true;
    }
    let mut pool: Vec<RootFunctional> = vec![d.zero_functional()];
    pool.extend(d.lambda_t());
    let mut seen = BTreeSet::new();
    seen.insert(alpha.clone());
    let mut queue = VecDeque::new();
    queue.push_back((alpha.clone(), 0usize));
    while let Some((state, depth)) = queue.pop_front() {
        if depth == max_pairs {
            continue;
        }
        for b1 in &pool {
            // first entry of the pair: sums that cancel become theta marks,
            // anything else must reach the operator root system
            let mid = if !b1.is_zero() && state.add(b1).is_zero() {
                ChainState::Theta(state.clone())
            } else {
                let g = state.add(b1);
                if d.is_l_root(&g) || d.is_l_root(&g.neg()) {
                    ChainState::Root(g)
                } else {
                    continue;
                }
            };
            for b2 in &pool {
                // second entry: thetas absorb or die, roots add up;
                // the result must be a nonzero module root
                let next = match &mid {
                    ChainState::Theta(f) => {
                        if b2.is_zero() || !naive_theta_absorbs(a, d, wide, f, b2) {
                            continue;
                        }
                        b2.clone()
                    }
                    ChainState::Root(g) => {
                        if !b2.is_zero() && d.is_t_root(g) && g.add(b2).is_zero() {
                            continue;
                        }
                        g.add(b2)
                    }
                };
                if next.is_zero() || !d.is_t_root(&next) {
                    continue;
                }
                if seen.contains(&next) {
                    continue;
                }
                if goal.contains(&next) {
                    return true;
                }
                seen.insert(next.clone());
                queue.push_back((next, depth + 1));
            }
        }
    }
    false
}

/// Connection classes via the naive connectivity test, grouped first-match
/// in functional order.
pub fn naive_classes(
    a: &GradedAlgebra,
    d: &RootDecomposition,
    wide: bool,
) -> Vec<Vec<RootFunctional>> {
    let roots = d.lambda_t();
    let max_pairs = roots.len();
    let mut class_of: BTreeMap<RootFunctional, usize> = BTreeMap::new();
    let mut classes: Vec<Vec<RootFunctional>> = Vec::new();
    for alpha in &roots {
        if class_of.contains_key(alpha) {
            continue;
        }
        let idx = classes.len();
        let mut members = Vec::new();
        for beta in &roots {
            if class_of.contains_key(beta) {
                continue;
            }
            if beta == alpha || naive_connected(a, d, wide, alpha, beta, max_pairs) {
                class_of.insert(beta.clone(), idx);
                members.push(beta.clone());
            }
        }
        classes.push(members);
    }
    classes
}

/// Set-of-sets comparison for root partitions.
pub fn same_partition(a: &[Vec<RootFunctional>], b: &[Vec<RootFunctional>]) -> bool {
    let norm = |p: &[Vec<RootFunctional>]| -> BTreeSet<BTreeSet<RootFunctional>> {
        p.iter().map(|c| c.iter().cloned().collect()).collect()
    };
    norm(a) == norm(b)
}
