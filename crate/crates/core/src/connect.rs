//! Root connections and the decomposition they induce.
//!
//! Two roots are connected when a chain of roots links them through the
//! symbolic sum, which tracks sums of functionals but absorbs the degenerate
//! sum of a root with its negative into a formal theta symbol. Connectivity
//! is an equivalence relation; each class contributes an ideal, and the
//! algebra splits as a complement of the interior zero part plus the sum of
//! class ideals. Everything here is certified by exact computation, and all
//! products go through the working bracket: the raw bracket for plain
//! flavors, the inverse-twisted bracket for hom flavors (which matches the
//! raw bracket of the untwisted companion algebra).

use crate::algebra::{Flavor, GradedAlgebra};
use crate::linalg::{canonical_complement, Matrix, Subspace};
use crate::roots::{
    decompose_roots, subspace_is_graded, Masa, PropertyResult, RootDecomposition,
    RootFunctional, RootsError,
};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConnectError {
    #[error("symbolic sum is not defined on these operands: {detail}")]
    DomainError { detail: String },
    #[error("root systems must be symmetric for connection chains")]
    NotSymmetric,
    #[error("expected a hom flavor, found {found}")]
    WrongFlavor { found: Flavor },
    #[error("the untwisted route disagrees with the direct route: {detail}")]
    TransportMismatch { detail: String },
    #[error("companion algebra construction failed: {0}")]
    Companion(String),
    #[error(transparent)]
    Roots(#[from] RootsError),
}

/// An element of the extended root alphabet the symbolic sum works over.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum SymbolicRoot {
    /// nonzero functional in the root system of T
    RootT(RootFunctional),
    /// nonzero functional in the operator root system only
    RootL(RootFunctional),
    /// formal symbol absorbing the sum of a T root with its negative
    Theta(RootFunctional),
    /// the zero functional
    Zero(RootFunctional),
    /// a nonzero functional lying in neither root system (a dead end for
    /// chains; the symbolic sum can produce arbitrary functionals)
    Outside(RootFunctional),
}

impl SymbolicRoot {
    pub fn functional(&self) -> &RootFunctional {
        match self {
            SymbolicRoot::RootT(f)
            | SymbolicRoot::RootL(f)
            | SymbolicRoot::Theta(f)
            | SymbolicRoot::Zero(f)
            | SymbolicRoot::Outside(f) => f,
        }
    }

    pub fn is_theta(&self) -> bool {
        matches!(self, SymbolicRoot::Theta(_))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, SymbolicRoot::Zero(_))
    }
}

impl fmt::Display for SymbolicRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolicRoot::Theta(a) => write!(f, "theta_{a}"),
            SymbolicRoot::Zero(_) => f.write_str("0"),
            other => write!(f, "{}", other.functional()),
        }
    }
}

/// A connection chain: entries from the root system plus zero, together with
/// the sign and transport power of the reached target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionChain {
    pub entries: Vec<RootFunctional>,
    pub target_sign: i8,
    pub target_power: usize,
}

impl fmt::Display for ConnectionChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// One interior tower: level 0 is the product of a root space, its negative
/// and the zero space; each next level multiplies by the zero space twice.
#[derive(Debug, Clone)]
pub struct Tower {
    pub levels: Vec<Subspace>,
    pub total: Subspace,
    pub level_certificate: Option<String>,
}

/// The class ideal attached to one connection class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassIdeal {
    pub class: Vec<RootFunctional>,
    pub t0_part: Subspace,
    pub v_part: Subspace,
    pub total: Subspace,
}

/// The decomposition of T into a complement plus class ideals.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub classes: Vec<Vec<RootFunctional>>,
    pub ideals: Vec<ClassIdeal>,
    pub t0_lambda: Subspace,
    pub complement_u: Subspace,
    pub corollary_direct_sum: bool,
    pub certificates: Vec<PropertyResult>,
}

impl Decomposition {
    pub fn all_pass(&self) -> bool {
        self.certificates.iter().all(|c| c.pass())
    }
}

/// Stateful engine caching towers and the symmetrized product spaces.
pub struct ConnectionEngine<'a> {
    a: &'a GradedAlgebra,
    d: &'a RootDecomposition,
    wide: bool,
    twist: Option<Matrix>,
    towers: BTreeMap<RootFunctional, Tower>,
    tab: BTreeMap<(RootFunctional, RootFunctional), Subspace>,
}

impl<'a> ConnectionEngine<'a> {
    pub fn new(a: &'a GradedAlgebra, d: &'a RootDecomposition, wide: bool) -> Self {
        let twist = if a.flavor().is_hom() {
            a.phi_inv().cloned()
        } else {
            None
        };
        ConnectionEngine {
            a,
            d,
            wide,
            twist,
            towers: BTreeMap::new(),
            tab: BTreeMap::new(),
        }
    }

    pub fn decomposition_data(&self) -> &RootDecomposition {
        self.d
    }

    /// Working-bracket span of three subspaces.
    fn wspan(&self, x: &Subspace, y: &Subspace, z: &Subspace) -> Subspace {
        self.a.triple_span_mapped(x, y, z, self.twist.as_ref())
    }

    fn require_symmetry(&self) -> Result<(), ConnectError> {
        if self.d.t_symmetric() && self.d.l_symmetric() {
            Ok(())
        } else {
            Err(ConnectError::NotSymmetric)
        }
    }

    /// The interior space attached to a root: the stabilized sum of the
    /// tower levels.
    pub fn t0_alpha(&mut self, alpha: &RootFunctional) -> Subspace {
        self.tower(alpha).total.clone()
    }

    pub fn tower(&mut self, alpha: &RootFunctional) -> &Tower {
        if !self.towers.contains_key(alpha) {
            let t = self.build_tower(alpha);
            self.towers.insert(alpha.clone(), t);
        }
        &self.towers[alpha]
    }

    fn build_tower(&self, alpha: &RootFunctional) -> Tower {
        let t0 = self.d.t_zero();
        let s_alpha = self.d.t_space(alpha);
        let s_neg = self.d.t_space(&alpha.neg());
        let mut levels = vec![self.wspan(&s_alpha, &s_neg, t0)];
        let mut total = levels[0].clone();
        loop {
            let next = self.wspan(levels.last().unwrap(), t0, t0);
            let grown = total.sum(&next);
            if grown == total {
                levels.push(next);
                break;
            }
            total = grown;
            levels.push(next.clone());
        }
        // every level is stable under late zero-slot multiplication, and
        // middle-slot multiplication climbs at most one level
        let mut level_certificate = None;
        for k in 0..levels.len() {
            let fixed = self.wspan(t0, t0, &levels[k]);
            if !levels[k].contains(&fixed) {
                level_certificate = Some(format!(
                    "zero-zero-level product escapes level {k} for root {alpha}"
                ));
                break;
            }
            let climb = self.wspan(t0, &levels[k], t0);
            let bound = if k + 1 < levels.len() {
                levels[k].sum(&levels[k + 1])
            } else {
                levels[k].sum(&self.wspan(&levels[k], t0, t0))
            };
            if !bound.contains(&climb) {
                level_certificate = Some(format!(
                    "zero-level-zero product escapes adjacent levels at {k} for root {alpha}"
                ));
                break;
            }
        }
        Tower {
            levels,
            total,
            level_certificate,
        }
    }

    /// The symmetrized product space of two roots. Symmetric in each sign
    /// and in the pair order by construction.
    pub fn t_alpha_beta(&mut self, alpha: &RootFunctional, beta: &RootFunctional) -> Subspace {
        let key = pair_key(alpha, beta);
        if let Some(s) = self.tab.get(&key) {
            return s.clone();
        }
        let n = self.a.dim();
        let spec = self.a.field();
        let mut acc = Subspace::zero(spec, n);
        let t0 = self.d.t_zero().clone();
        let pairs = [
            (alpha.clone(), beta.clone()),
            (beta.clone(), alpha.clone()),
        ];
        for (u, v) in &pairs {
            for su in [u.clone(), u.neg()] {
                for tv in [v.clone(), v.neg()] {
                    let a_sp = self.d.t_space(&su);
                    let a_neg = self.d.t_space(&su.neg());
                    let b_sp = self.d.t_space(&tv);
                    if self.wide {
                        for arrangement in
                            permute3(&a_sp, &a_neg, &b_sp)
                        {
                            acc = acc.sum(&self.wspan(
                                arrangement.0,
                                arrangement.1,
                                arrangement.2,
                            ));
                        }
                    } else {
                        acc = acc.sum(&self.wspan(&a_sp, &a_neg, &b_sp));
                    }
                    let ta = self.t0_alpha(&su);
                    let tb_root = self.d.t_space(&tv);
                    let tb_interior = self.t0_alpha(&tv);
                    for arrangement in permute3(&ta, &tb_root, &t0) {
                        acc = acc.sum(&self.wspan(
                            arrangement.0,
                            arrangement.1,
                            arrangement.2,
                        ));
                    }
                    for arrangement in permute3(&ta, &tb_interior, &t0) {
                        acc = acc.sum(&self.wspan(
                            arrangement.0,
                            arrangement.1,
                            arrangement.2,
                        ));
                    }
                }
            }
        }
        self.tab.insert(key, acc.clone());
        acc
    }

    /// Classify a functional into the extended alphabet. Membership in the
    /// root system of T wins over the operator system when both hold.
    pub fn classify(&self, f: RootFunctional) -> SymbolicRoot {
        if f.is_zero() {
            SymbolicRoot::Zero(f)
        } else if self.d.is_t_root(&f) {
            SymbolicRoot::RootT(f)
        } else if self.d.is_l_root(&f) {
            SymbolicRoot::RootL(f)
        } else {
            SymbolicRoot::Outside(f)
        }
    }

    /// The symbolic sum. The left operand must be a root or a theta symbol,
    /// the right operand a root of T or zero. Tags are checked against the
    /// actual root systems, not taken on faith.
    pub fn dotplus(
        &mut self,
        a: &SymbolicRoot,
        b: &SymbolicRoot,
    ) -> Result<SymbolicRoot, ConnectError> {
        match b {
            SymbolicRoot::RootT(f) if self.d.is_t_root(f) => {}
            SymbolicRoot::Zero(f) if f.is_zero() => {}
            other => {
                return Err(ConnectError::DomainError {
                    detail: format!("right operand {other} is not a root of T or zero"),
                })
            }
        }
        match a {
            SymbolicRoot::RootT(f) | SymbolicRoot::Theta(f) if !self.d.is_t_root(f) => {
                return Err(ConnectError::DomainError {
                    detail: format!("left operand {a} is not backed by a root of T"),
                });
            }
            SymbolicRoot::RootL(f) if !self.d.is_l_root(f) => {
                return Err(ConnectError::DomainError {
                    detail: format!("left operand {f} is not an operator root"),
                });
            }
            _ => {}
        }
        match a {
            SymbolicRoot::Theta(alpha) => {
                if b.is_zero() {
                    return Ok(SymbolicRoot::Zero(self.d.zero_functional()));
                }
                let beta = b.functional().clone();
                if self.orbit_product_nonzero(alpha, &beta) {
                    Ok(SymbolicRoot::RootT(beta))
                } else {
                    Ok(SymbolicRoot::Zero(self.d.zero_functional()))
                }
            }
            SymbolicRoot::RootT(alpha) => {
                let sum = alpha.add(b.functional());
                if !b.is_zero() && sum.is_zero() {
                    Ok(SymbolicRoot::Theta(alpha.clone()))
                } else {
                    Ok(self.classify(sum))
                }
            }
            SymbolicRoot::RootL(delta) => Ok(self.classify(delta.add(b.functional()))),
            other => Err(ConnectError::DomainError {
                detail: format!("left operand {other} is neither a root nor a theta symbol"),
            }),
        }
    }

    /// Whether the symmetrized product space is nonzero anywhere along the
    /// joint transport orbit of the pair. The walk stops if transport ever
    /// leaves the root system, which keeps the orbit finite even then.
    fn orbit_product_nonzero(&mut self, alpha: &RootFunctional, beta: &RootFunctional) -> bool {
        let mut seen = BTreeSet::new();
        let mut pair = (alpha.clone(), beta.clone());
        while seen.insert(pair.clone()) {
            if !self.d.is_t_root(&pair.0) || !self.d.is_t_root(&pair.1) {
                break;
            }
            if !self.t_alpha_beta(&pair.0, &pair.1).is_zero() {
                return true;
            }
            pair = (
                self.d.root_after_phi(&pair.0),
                self.d.root_after_phi(&pair.1),
            );
        }
        false
    }

    /// Signed transport targets of a root: all functionals of the form
    /// (+/-) beta Phi^k, each with its sign and power.
    fn transport_targets(&self, beta: &RootFunctional) -> Vec<(RootFunctional, i8, usize)> {
        let mut out = Vec::new();
        for (k, g) in self.d.phi_orbit(beta).into_iter().enumerate() {
            out.push((g.clone(), 1, k));
            out.push((g.neg(), -1, k));
        }
        out
    }

    /// Whether a middle result satisfies the even-position chain condition.
    fn mid_ok(&self, s: &SymbolicRoot) -> bool {
        match s {
            SymbolicRoot::Theta(_) => true,
            SymbolicRoot::Zero(_) => false,
            other => {
                let f = other.functional();
                self.d.is_l_root(f) || self.d.is_l_root(&f.neg())
            }
        }
    }

    /// Whether a step result can be a chain state (odd-position condition).
    fn state_ok(&self, s: &SymbolicRoot) -> bool {
        match s {
            SymbolicRoot::Theta(_) | SymbolicRoot::Zero(_) => false,
            other => {
                let f = other.functional();
                self.d.is_t_root(f) || self.d.is_t_root(&f.neg())
            }
        }
    }

    /// Breadth-first search for a shortest connection chain.
    pub fn is_connected(
        &mut self,
        alpha: &RootFunctional,
        beta: &RootFunctional,
    ) -> Result<Option<ConnectionChain>, ConnectError> {
        self.require_symmetry()?;
        if !self.d.is_t_root(alpha) || !self.d.is_t_root(beta) {
            return Err(ConnectError::DomainError {
                detail: format!("connection endpoints {alpha} and {beta} must be roots of T"),
            });
        }
        let targets = self.transport_targets(beta);
        let accept = |f: &RootFunctional| {
            targets
                .iter()
                .find(|(g, _, _)| g == f)
                .map(|(_, s, k)| (*s, *k))
        };
        if let Some((s, k)) = accept(alpha) {
            return Ok(Some(ConnectionChain {
                entries: vec![alpha.clone()],
                target_sign: s,
                target_power: k,
            }));
        }
        let mut entries_pool: Vec<RootFunctional> = vec![self.d.zero_functional()];
        entries_pool.extend(self.d.lambda_t());
        let mut parent: BTreeMap<RootFunctional, (RootFunctional, RootFunctional, RootFunctional)> =
            BTreeMap::new();
        let mut queue = VecDeque::new();
        let mut seen = BTreeSet::new();
        seen.insert(alpha.clone());
        queue.push_back(alpha.clone());
        while let Some(state) = queue.pop_front() {
            for b1 in entries_pool.clone() {
                let mid = self.dotplus(
                    &SymbolicRoot::RootT(state.clone()),
                    &self.classify_entry(&b1),
                )?;
                if !self.mid_ok(&mid) {
                    continue;
                }
                let mid_operand = match &mid {
                    SymbolicRoot::Theta(_) => mid.clone(),
                    other => self.classify(other.functional().clone()),
                };
                for b2 in entries_pool.clone() {
                    let next = self.dotplus(&mid_operand, &self.classify_entry(&b2))?;
                    if !self.state_ok(&next) {
                        continue;
                    }
                    let f = next.functional().clone();
                    if seen.contains(&f) {
                        continue;
                    }
                    seen.insert(f.clone());
                    parent.insert(f.clone(), (state.clone(), b1.clone(), b2.clone()));
                    if let Some((s, k)) = accept(&f) {
                        let mut rev = Vec::new();
                        let mut cur = f.clone();
                        while let Some((prev, e1, e2)) = parent.get(&cur) {
                            rev.push(e2.clone());
                            rev.push(e1.clone());
                            cur = prev.clone();
                        }
                        let mut entries = vec![alpha.clone()];
                        entries.extend(rev.into_iter().rev());
                        return Ok(Some(ConnectionChain {
                            entries,
                            target_sign: s,
                            target_power: k,
                        }));
                    }
                    queue.push_back(f);
                }
            }
        }
        Ok(None)
    }

    fn classify_entry(&self, f: &RootFunctional) -> SymbolicRoot {
        if f.is_zero() {
            SymbolicRoot::Zero(f.clone())
        } else {
            SymbolicRoot::RootT(f.clone())
        }
    }

    /// Replay a chain and check all four conditions of the connection
    /// definition against a source and target root.
    pub fn verify_chain(
        &mut self,
        chain: &ConnectionChain,
        alpha: &RootFunctional,
        beta: &RootFunctional,
    ) -> Result<(), String> {
        if chain.entries.len() % 2 == 0 || chain.entries.is_empty() {
            return Err("chain length must be odd".into());
        }
        if &chain.entries[0] != alpha {
            return Err("chain must start at the source root".into());
        }
        for e in &chain.entries {
            if !e.is_zero() && !self.d.is_t_root(e) {
                return Err(format!("entry {e} is not a root of T or zero"));
            }
        }
        let mut cur = SymbolicRoot::RootT(alpha.clone());
        if !self.state_ok(&cur) {
            return Err("source is not a root of T".into());
        }
        let mut i = 1;
        while i < chain.entries.len() {
            let mid = self
                .dotplus(&cur, &self.classify_entry(&chain.entries[i]))
                .map_err(|e| e.to_string())?;
            if !self.mid_ok(&mid) {
                return Err(format!("even partial result {mid} violates the chain condition"));
            }
            let mid_operand = match &mid {
                SymbolicRoot::Theta(_) => mid.clone(),
                other => self.classify(other.functional().clone()),
            };
            let next = self
                .dotplus(&mid_operand, &self.classify_entry(&chain.entries[i + 1]))
                .map_err(|e| e.to_string())?;
            if !self.state_ok(&next) {
                return Err(format!("odd partial result {next} violates the chain condition"));
            }
            cur = self.classify(next.functional().clone());
            i += 2;
        }
        let mut expected = beta.clone();
        for _ in 0..chain.target_power {
            expected = self.d.root_after_phi(&expected);
        }
        if chain.target_sign < 0 {
            expected = expected.neg();
        }
        if cur.functional() == &expected {
            Ok(())
        } else {
            Err(format!(
                "chain lands on {} instead of the declared target {}",
                cur.functional(),
                expected
            ))
        }
    }

    /// The partition of the root system under connectivity.
    pub fn connection_classes(&mut self) -> Result<Vec<Vec<RootFunctional>>, ConnectError> {
        self.require_symmetry()?;
        let roots = self.d.lambda_t();
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
                if beta == alpha || self.is_connected(alpha, beta)?.is_some() {
                    class_of.insert(beta.clone(), idx);
                    members.push(beta.clone());
                }
            }
            classes.push(members);
        }
        Ok(classes)
    }

    /// Equivalence and transport-stability certificates for a computed
    /// partition.
    pub fn check_partition(
        &mut self,
        classes: &[Vec<RootFunctional>],
    ) -> Result<Vec<PropertyResult>, ConnectError> {
        let mut class_of = BTreeMap::new();
        for (i, cls) in classes.iter().enumerate() {
            for f in cls {
                class_of.insert(f.clone(), i);
            }
        }
        let roots = self.d.lambda_t();
        let mut violation = None;
        'pairs: for a in &roots {
            for b in &roots {
                let connected = self.is_connected(a, b)?.is_some();
                let same = class_of.get(a) == class_of.get(b);
                if connected != same {
                    violation = Some(format!(
                        "pair ({a}, {b}): connectivity and the partition disagree"
                    ));
                    break 'pairs;
                }
                if connected {
                    let chain = self.is_connected(a, b)?.unwrap();
                    if let Err(e) = self.verify_chain(&chain, a, b) {
                        violation = Some(format!("chain replay for ({a}, {b}) failed: {e}"));
                        break 'pairs;
                    }
                }
            }
        }
        let mut out = vec![PropertyResult {
            name: "connectivity is an equivalence relation matching the partition".into(),
            violation,
        }];
        let mut violation = None;
        for a in &roots {
            for (g, _, _) in self.transport_targets(a) {
                if self.d.is_t_root(&g) && class_of.get(&g) != class_of.get(a) {
                    violation = Some(format!("transport image {g} of {a} changes class"));
                    break;
                }
            }
        }
        out.push(PropertyResult {
            name: "classes are stable under signed transport orbits".into(),
            violation,
        });
        Ok(out)
    }

    /// The ideal attached to one class: the interior part plus the sum of
    /// the class root spaces.
    pub fn build_class_ideal(&mut self, cls: &[RootFunctional]) -> ClassIdeal {
        let spec = self.a.field();
        let n = self.a.dim();
        let members: BTreeSet<RootFunctional> = cls.iter().cloned().collect();
        let mut pool: Vec<RootFunctional> = vec![self.d.zero_functional()];
        pool.extend(cls.iter().cloned());
        let mut t0_part = Subspace::zero(spec, n);
        for b in &pool {
            for c in &pool {
                for dd in cls {
                    if !b.add(c).add(dd).is_zero() {
                        continue;
                    }
                    let span = self.wspan(
                        &self.d.t_space(b),
                        &self.d.t_space(c),
                        &self.d.t_space(dd),
                    );
                    t0_part = t0_part.sum(&span);
                }
            }
        }
        for b in cls {
            let tower_total = self.t0_alpha(b);
            t0_part = t0_part.sum(&tower_total);
        }
        let mut v_part = Subspace::zero(spec, n);
        for b in &members {
            v_part = v_part.sum(&self.d.t_space(b));
        }
        let total = t0_part.sum(&v_part);
        ClassIdeal {
            class: cls.to_vec(),
            t0_part,
            v_part,
            total,
        }
    }

    /// The interior zero part spanned by all zero-sum products with a
    /// nonzero last root plus all towers.
    pub fn t0_lambda(&mut self) -> Subspace {
        let spec = self.a.field();
        let n = self.a.dim();
        let roots = self.d.lambda_t();
        let mut pool: Vec<RootFunctional> = vec![self.d.zero_functional()];
        pool.extend(roots.iter().cloned());
        let mut acc = Subspace::zero(spec, n);
        for a in &pool {
            for b in &pool {
                for c in &roots {
                    if !a.add(b).add(c).is_zero() {
                        continue;
                    }
                    acc = acc.sum(&self.wspan(
                        &self.d.t_space(a),
                        &self.d.t_space(b),
                        &self.d.t_space(c),
                    ));
                }
            }
        }
        for a in &roots {
            let t = self.t0_alpha(a);
            acc = acc.sum(&t);
        }
        acc
    }

    /// Certificate suite for the symbolic sum: the theta absorption
    /// properties and the chain transport properties.
    pub fn check_dotplus_properties(&mut self) -> Result<Vec<PropertyResult>, ConnectError> {
        self.require_symmetry()?;
        let roots = self.d.lambda_t();
        let mut out = Vec::new();

        // theta absorption: whenever theta_a absorbs into b, it does so
        // symmetrically, for both signs, and along the whole transport orbit
        let mut violation = None;
        'theta: for a in &roots {
            for b in &roots {
                let hit = self.dotplus(
                    &SymbolicRoot::Theta(a.clone()),
                    &SymbolicRoot::RootT(b.clone()),
                )?;
                if hit != SymbolicRoot::RootT(b.clone()) {
                    continue;
                }
                let swapped = self.dotplus(
                    &SymbolicRoot::Theta(b.clone()),
                    &SymbolicRoot::RootT(a.clone()),
                )?;
                if swapped != SymbolicRoot::RootT(a.clone()) {
                    violation = Some(format!("theta_{b} does not absorb {a} back"));
                    break 'theta;
                }
                let negated = self.dotplus(
                    &SymbolicRoot::Theta(a.neg()),
                    &SymbolicRoot::RootT(b.clone()),
                )?;
                if negated != SymbolicRoot::RootT(b.clone()) {
                    violation = Some(format!("theta_-{a} loses {b}"));
                    break 'theta;
                }
                let both_neg = self.dotplus(
                    &SymbolicRoot::Theta(a.neg()),
                    &SymbolicRoot::RootT(b.neg()),
                )?;
                if both_neg != SymbolicRoot::RootT(b.neg()) {
                    violation = Some(format!("theta_-{a} loses -{b}"));
                    break 'theta;
                }
                let mut pair = (a.clone(), b.clone());
                let mut seen = BTreeSet::new();
                while seen.insert(pair.clone()) {
                    if !self.d.is_t_root(&pair.0) || !self.d.is_t_root(&pair.1) {
                        violation = Some(format!(
                            "transport leaves the root system at ({}, {})",
                            pair.0, pair.1
                        ));
                        break 'theta;
                    }
                    let moved = self.dotplus(
                        &SymbolicRoot::Theta(pair.0.clone()),
                        &SymbolicRoot::RootT(pair.1.clone()),
                    )?;
                    if moved != SymbolicRoot::RootT(pair.1.clone()) {
                        violation = Some(format!(
                            "transport breaks theta absorption at ({}, {})",
                            pair.0, pair.1
                        ));
                        break 'theta;
                    }
                    pair = (
                        self.d.root_after_phi(&pair.0),
                        self.d.root_after_phi(&pair.1),
                    );
                }
            }
        }
        out.push(PropertyResult {
            name: "theta absorption is symmetric, sign-stable and transport-stable".into(),
            violation,
        });

        // two-step sums: transported, negated and reversed chains land where
        // the originals dictate
        let mut pool: Vec<RootFunctional> = vec![self.d.zero_functional()];
        pool.extend(roots.iter().cloned());
        let mut violation = None;
        'twostep: for a in &roots {
            for b in &pool {
                let mid = self.dotplus(
                    &SymbolicRoot::RootT(a.clone()),
                    &self.classify_entry(b),
                )?;
                if !self.mid_ok(&mid) {
                    continue;
                }
                let mid_operand = match &mid {
                    SymbolicRoot::Theta(_) => mid.clone(),
                    other => self.classify(other.functional().clone()),
                };
                for c in &pool {
                    let fin = self.dotplus(&mid_operand, &self.classify_entry(c))?;
                    let delta = match &fin {
                        SymbolicRoot::RootT(f) => f.clone(),
                        _ => continue,
                    };
                    // transported run
                    let mut tuple = (a.clone(), b.clone(), c.clone(), delta.clone());
                    let mut seen = BTreeSet::new();
                    while seen.insert(tuple.clone()) {
                        if let Some(detail) = self.two_step_mismatch(
                            &tuple.0, &tuple.1, &tuple.2, &tuple.3,
                        )? {
                            violation = Some(format!("transported chain fails: {detail}"));
                            break 'twostep;
                        }
                        tuple = (
                            self.d.root_after_phi(&tuple.0),
                            self.d.root_after_phi(&tuple.1),
                            self.d.root_after_phi(&tuple.2),
                            self.d.root_after_phi(&tuple.3),
                        );
                    }
                    // negated run
                    if let Some(detail) =
                        self.two_step_mismatch(&a.neg(), &b.neg(), &c.neg(), &delta.neg())?
                    {
                        violation = Some(format!("negated chain fails: {detail}"));
                        break 'twostep;
                    }
                    // reversed run
                    if let Some(detail) = self.two_step_mismatch(&delta, &c.neg(), &b.neg(), a)? {
                        violation = Some(format!("reversed chain fails: {detail}"));
                        break 'twostep;
                    }
                }
            }
        }
        out.push(PropertyResult {
            name: "two-step sums survive transport, negation and reversal".into(),
            violation,
        });
        Ok(out)
    }

    /// Checks one two-step sum: a then b must give a valid middle, then c
    /// must land exactly on the expected root.
    fn two_step_mismatch(
        &mut self,
        a: &RootFunctional,
        b: &RootFunctional,
        c: &RootFunctional,
        expected: &RootFunctional,
    ) -> Result<Option<String>, ConnectError> {
        if !self.d.is_t_root(a) || !self.d.is_t_root(expected) {
            return Ok(Some(format!("{a} or {expected} left the root system")));
        }
        for entry in [b, c] {
            if !entry.is_zero() && !self.d.is_t_root(entry) {
                return Ok(Some(format!("entry {entry} left the root system")));
            }
        }
        let mid = self.dotplus(&SymbolicRoot::RootT(a.clone()), &self.classify_entry(b))?;
        if !self.mid_ok(&mid) {
            return Ok(Some(format!("({a}) + ({b}) gives an invalid middle {mid}")));
        }
        let mid_operand = match &mid {
            SymbolicRoot::Theta(_) => mid.clone(),
            other => self.classify(other.functional().clone()),
        };
        let fin = self.dotplus(&mid_operand, &self.classify_entry(c))?;
        match fin {
            SymbolicRoot::RootT(f) if &f == expected => Ok(None),
            other => Ok(Some(format!(
                "(({a}) + ({b})) + ({c}) = {other}, expected {expected}"
            ))),
        }
    }

    /// Certificate suite for class-respecting products: single products of
    /// root spaces, products against interior generators, and products
    /// against tower levels all stay inside the class ideal.
    pub fn check_class_products(
        &mut self,
        classes: &[Vec<RootFunctional>],
        ideals: &[ClassIdeal],
    ) -> Result<Vec<PropertyResult>, ConnectError> {
        let mut class_of = BTreeMap::new();
        for (i, cls) in classes.iter().enumerate() {
            for f in cls {
                class_of.insert(f.clone(), i);
            }
        }
        let roots = self.d.lambda_t();
        let mut pool: Vec<RootFunctional> = vec![self.d.zero_functional()];
        pool.extend(roots.iter().cloned());
        let in_class = |f: &RootFunctional, idx: usize| {
            f.is_zero() || class_of.get(f) == Some(&idx)
        };
        let mut out = Vec::new();

        // products with one slot in a class root space
        let mut violation = None;
        'single: for (idx, cls) in classes.iter().enumerate() {
            for alpha in cls {
                for b in &pool {
                    for c in &pool {
                        let arrangements = [
                            (alpha, b, c),
                            (b, alpha, c),
                            (b, c, alpha),
                        ];
                        for (x, y, z) in arrangements {
                            let span = self.wspan(
                                &self.d.t_space(x),
                                &self.d.t_space(y),
                                &self.d.t_space(z),
                            );
                            if span.is_zero() {
                                continue;
                            }
                            let sum = x.add(y).add(z);
                            let others: Vec<&RootFunctional> = [x, y, z]
                                .into_iter()
                                .filter(|f| *f != alpha)
                                .collect();
                            let ok = others.iter().all(|f| in_class(f, idx))
                                && in_class(&sum, idx)
                                && ideals[idx].total.contains(&span);
                            if !ok {
                                violation = Some(format!(
                                    "product over ({x}, {y}, {z}) leaves the class of {alpha}"
                                ));
                                break 'single;
                            }
                        }
                    }
                }
            }
        }
        out.push(PropertyResult {
            name: "products touching a class root space stay in the class ideal".into(),
            violation,
        });

        // products against zero-sum interior generators of the class
        let mut violation = None;
        'interior: for (idx, cls) in classes.iter().enumerate() {
            let mut gen_pool: Vec<RootFunctional> = vec![self.d.zero_functional()];
            gen_pool.extend(cls.iter().cloned());
            for a in &gen_pool {
                for b in &gen_pool {
                    for g in cls {
                        if !a.add(b).add(g).is_zero() {
                            continue;
                        }
                        let inner = self.wspan(
                            &self.d.t_space(a),
                            &self.d.t_space(b),
                            &self.d.t_space(g),
                        );
                        if inner.is_zero() {
                            continue;
                        }
                        for dd in &pool {
                            for ee in &pool {
                                let sd = self.d.t_space(dd);
                                let se = self.d.t_space(ee);
                                let arrangements = [
                                    self.wspan(&inner, &sd, &se),
                                    self.wspan(&sd, &inner, &se),
                                    self.wspan(&sd, &se, &inner),
                                ];
                                for span in arrangements {
                                    if span.is_zero() {
                                        continue;
                                    }
                                    let ok = in_class(dd, idx)
                                        && in_class(ee, idx)
                                        && in_class(&dd.add(ee), idx)
                                        && ideals[idx].total.contains(&span);
                                    if !ok {
                                        violation = Some(format!(
                                            "interior product for class {idx} escapes at ({dd}, {ee})"
                                        ));
                                        break 'interior;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        out.push(PropertyResult {
            name: "products against interior generators stay in the class ideal".into(),
            violation,
        });

        // products against tower levels
        let mut violation = None;
        'towers: for (idx, cls) in classes.iter().enumerate() {
            for alpha in cls {
                let levels = self.tower(alpha).levels.clone();
                for level in levels {
                    if level.is_zero() {
                        continue;
                    }
                    for dd in &pool {
                        for ee in &pool {
                            let sd = self.d.t_space(dd);
                            let se = self.d.t_space(ee);
                            let arrangements = [
                                self.wspan(&level, &sd, &se),
                                self.wspan(&sd, &level, &se),
                                self.wspan(&sd, &se, &level),
                            ];
                            for span in arrangements {
                                if span.is_zero() {
                                    continue;
                                }
                                let ok = in_class(dd, idx)
                                    && in_class(ee, idx)
                                    && in_class(&dd.add(ee), idx)
                                    && ideals[idx].total.contains(&span);
                                if !ok {
                                    violation = Some(format!(
                                        "tower product for class {idx} escapes at ({dd}, {ee})"
                                    ));
                                    break 'towers;
                                }
                            }
                        }
                    }
                }
            }
        }
        out.push(PropertyResult {
            name: "products against tower levels stay in the class ideal".into(),
            violation,
        });
        Ok(out)
    }
}

fn pair_key(
    alpha: &RootFunctional,
    beta: &RootFunctional,
) -> (RootFunctional, RootFunctional) {
    let ca = std::cmp::max(alpha.clone(), alpha.neg());
    let cb = std::cmp::max(beta.clone(), beta.neg());
    if ca <= cb {
        (ca, cb)
    } else {
        (cb, ca)
    }
}

fn permute3<'s>(
    a: &'s Subspace,
    b: &'s Subspace,
    c: &'s Subspace,
) -> [(&'s Subspace, &'s Subspace, &'s Subspace); 6] {
    [
        (a, b, c),
        (a, c, b),
        (b, a, c),
        (b, c, a),
        (c, a, b),
        (c, b, a),
    ]
}

/// Full decomposition: connection classes, their ideals, the interior zero
/// part, a canonical complement, and the certificate suite.
pub fn decompose(
    a: &GradedAlgebra,
    d: &RootDecomposition,
    wide: bool,
) -> Result<Decomposition, ConnectError> {
    let mut engine = ConnectionEngine::new(a, d, wide);
    let classes = engine.connection_classes()?;
    let mut certificates = engine.check_partition(&classes)?;
    let ideals: Vec<ClassIdeal> = classes
        .iter()
        .map(|cls| engine.build_class_ideal(cls))
        .collect();
    let t0_lambda = engine.t0_lambda();

    // the interior zero part lives inside the zero root space
    certificates.push(PropertyResult {
        name: "interior zero part lies in the zero root space".into(),
        violation: if d.t_zero().contains(&t0_lambda)
            && ideals.iter().all(|i| d.t_zero().contains(&i.t0_part))
        {
            None
        } else {
            Some("an interior space escapes the zero root space".into())
        },
    });

    let complement_u = canonical_complement(d.t_zero(), &t0_lambda);

    // each ideal: directness of its two parts, ideal property, gradedness
    let mut violation = None;
    for (i, ideal) in ideals.iter().enumerate() {
        if ideal.t0_part.intersect(&ideal.v_part).dim() != 0
            || ideal.total.dim() != ideal.t0_part.dim() + ideal.v_part.dim()
        {
            violation = Some(format!("ideal {i}: interior and root parts overlap"));
            break;
        }
        if !a.is_ideal(&ideal.total) {
            violation = Some(format!("ideal {i} fails the ideal property"));
            break;
        }
        if !subspace_is_graded(&ideal.total, a.degrees()) {
            violation = Some(format!("ideal {i} is not a graded subspace"));
            break;
        }
        if !ideal.total.image_under(a.phi()).contains(&ideal.total)
            || !ideal.total.contains(&ideal.total.image_under(a.phi()))
        {
            violation = Some(format!("ideal {i} is not stable under the automorphism"));
            break;
        }
    }
    certificates.push(PropertyResult {
        name: "class ideals are graded automorphism-stable ideals".into(),
        violation,
    });

    // global direct sum: complement plus all ideals fill T exactly once
    let spec = a.field();
    let n = a.dim();
    let mut total = complement_u.clone();
    let mut dim_sum = complement_u.dim();
    let mut violation = None;
    for (i, ideal) in ideals.iter().enumerate() {
        if total.intersect(&ideal.total).dim() != 0 {
            violation = Some(format!("ideal {i} overlaps the span of the earlier parts"));
            break;
        }
        total = total.sum(&ideal.total);
        dim_sum += ideal.total.dim();
    }
    if violation.is_none() && (dim_sum != n || total != Subspace::full(spec, n)) {
        violation = Some(format!(
            "complement and ideals span dimension {dim_sum} of {n}"
        ));
    }
    certificates.push(PropertyResult {
        name: "complement and class ideals decompose the whole space".into(),
        violation,
    });

    // cross-class products vanish in every slot arrangement
    let full = Subspace::full(spec, n);
    let mut violation = None;
    'cross: for i in 0..ideals.len() {
        for j in 0..ideals.len() {
            if i == j {
                continue;
            }
            let ii = &ideals[i].total;
            let jj = &ideals[j].total;
            let products = [
                a.triple_span(&full, ii, jj),
                a.triple_span(ii, &full, jj),
                a.triple_span(ii, jj, &full),
            ];
            for p in products {
                if !p.is_zero() {
                    violation = Some(format!("classes {i} and {j} have a nonzero product"));
                    break 'cross;
                }
            }
        }
    }
    certificates.push(PropertyResult {
        name: "cross-class products vanish".into(),
        violation,
    });

    // tower level certificates
    let mut violation = None;
    for alpha in d.lambda_t() {
        if let Some(v) = engine.tower(&alpha).level_certificate.clone() {
            violation = Some(v);
            break;
        }
    }
    certificates.push(PropertyResult {
        name: "tower levels absorb zero-space multiplication as expected".into(),
        violation,
    });

    certificates.extend(engine.check_dotplus_properties()?);
    certificates.extend(engine.check_class_products(&classes, &ideals)?);

    let corollary_direct_sum =
        *d.t_zero() == t0_lambda && a.annihilator().is_zero();

    Ok(Decomposition {
        classes,
        ideals,
        t0_lambda,
        complement_u,
        corollary_direct_sum,
        certificates,
    })
}

/// Decomposition for hom flavors, computed along the untwisted companion
/// algebra and cross-checked against the direct computation on the hom
/// algebra itself. The two routes must agree subspace by subspace; the
/// companion's ideals are then re-certified against the hom bracket.
pub fn decompose_hom(
    a: &GradedAlgebra,
    d: &RootDecomposition,
    masa: &Masa,
    wide: bool,
) -> Result<Decomposition, ConnectError> {
    if !a.flavor().is_hom() {
        return Err(ConnectError::WrongFlavor { found: a.flavor() });
    }
    let direct = decompose(a, d, wide)?;

    let companion = a
        .dehomify()
        .map_err(|e| ConnectError::Companion(e.to_string()))?;
    let companion_env = crate::envelope::build_envelope(&companion)
        .map_err(|e| ConnectError::Companion(e.to_string()))?;
    let companion_roots = decompose_roots(&companion, &companion_env, masa)?;
    let untwisted = decompose(&companion, &companion_roots, wide)?;

    if untwisted.classes != direct.classes {
        return Err(ConnectError::TransportMismatch {
            detail: "partition of the root system differs between routes".into(),
        });
    }
    for (i, (x, y)) in untwisted.ideals.iter().zip(&direct.ideals).enumerate() {
        if x.t0_part != y.t0_part || x.v_part != y.v_part {
            return Err(ConnectError::TransportMismatch {
                detail: format!("ideal {i} differs between routes"),
            });
        }
    }
    if untwisted.t0_lambda != direct.t0_lambda
        || untwisted.complement_u != direct.complement_u
    {
        return Err(ConnectError::TransportMismatch {
            detail: "interior zero part or complement differs between routes".into(),
        });
    }

    // re-certify the transported ideals against the hom algebra's own
    // bracket and automorphism
    let mut certificates = direct.certificates.clone();
    let mut violation = None;
    for (i, ideal) in untwisted.ideals.iter().enumerate() {
        if !a.is_ideal(&ideal.total) {
            violation = Some(format!(
                "transported ideal {i} is not an ideal for the hom bracket"
            ));
            break;
        }
    }
    let spec = a.field();
    let n = a.dim();
    let full = Subspace::full(spec, n);
    if violation.is_none() {
        'cross: for i in 0..untwisted.ideals.len() {
            for j in 0..untwisted.ideals.len() {
                if i == j {
                    continue;
                }
                let ii = &untwisted.ideals[i].total;
                let jj = &untwisted.ideals[j].total;
                let products = [
                    a.triple_span(&full, ii, jj),
                    a.triple_span(ii, &full, jj),
                    a.triple_span(ii, jj, &full),
                ];
                for p in products {
                    if !p.is_zero() {
                        violation = Some(format!(
                            "transported classes {i} and {j} multiply nontrivially under the hom bracket"
                        ));
                        break 'cross;
                    }
                }
            }
        }
    }
    certificates.push(PropertyResult {
        name: "transported ideals hold up against the hom bracket".into(),
        violation,
    });

    Ok(Decomposition {
        certificates,
        ..direct
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{structure_from_entries, Flavor, GradedAlgebra};
    use crate::envelope::build_envelope;
    use crate::field::{FieldSpec, Scalar};
    use crate::grading::{Bicharacter, GradingGroup};
    use crate::linalg::{unit_vector, vec_zero};
    use crate::roots::{decompose_roots, Masa};

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn sl2_entries(shift: usize) -> Vec<(usize, usize, usize, usize, Scalar)> {
        let spec = q();
        let e = |k: i64| spec.integer(k);
        let s = shift;
        vec![
            (s, s + 1, s, s, e(2)),
            (s, s + 1, s + 1, s + 1, e(-2)),
            (s + 1, s, s, s, e(-2)),
            (s + 1, s, s + 1, s + 1, e(2)),
            (s + 2, s, s + 1, s + 2, e(2)),
            (s + 2, s, s + 2, s, e(-4)),
            (s, s + 2, s + 1, s + 2, e(-2)),
            (s, s + 2, s + 2, s, e(4)),
            (s + 2, s + 1, s, s + 2, e(2)),
            (s + 2, s + 1, s + 2, s + 1, e(-4)),
            (s + 1, s + 2, s, s + 2, e(-2)),
            (s + 1, s + 2, s + 2, s + 1, e(4)),
        ]
    }

    fn algebra(
        dim: usize,
        entries: Vec<(usize, usize, usize, usize, Scalar)>,
        phi: Matrix,
    ) -> GradedAlgebra {
        let spec = q();
        let group = GradingGroup::trivial();
        let names = (0..dim).map(|i| format!("x{i}")).collect();
        GradedAlgebra::new(
            spec,
            group.clone(),
            Bicharacter::trivial(spec, 0),
            names,
            vec![group.zero(); dim],
            structure_from_entries(entries),
            phi,
            Flavor::LeibnizWithAutomorphism,
        )
    }

    fn sl2() -> GradedAlgebra {
        algebra(3, sl2_entries(0), Matrix::identity(q(), 3))
    }

    fn masa_line() -> Masa {
        Masa::new(vec![vec![q().one(), q().zero(), q().zero()]])
    }

    fn rf(vals: Vec<i64>) -> RootFunctional {
        RootFunctional::new(vals.into_iter().map(|k| q().integer(k)).collect())
    }

    #[test]
    fn sl2_tower_dies_but_pair_space_does_not() {
        let a = sl2();
        let env = build_envelope(&a).unwrap();
        let d = decompose_roots(&a, &env, &masa_line()).unwrap();
        let mut engine = ConnectionEngine::new(&a, &d, false);
        let two = rf(vec![2]);
        assert!(engine.t0_alpha(&two).is_zero());
        assert!(engine.tower(&two).level_certificate.is_none());
        let tab = engine.t_alpha_beta(&two, &two);
        assert!(tab.contains_vector(&unit_vector(q(), 3, 0)));
        assert_eq!(
            tab,
            engine.t_alpha_beta(&two.neg(), &two),
            "pair space must be sign-symmetric"
        );
    }

    #[test]
    fn symbolic_sum_bullets() {
        let a = sl2();
        let env = build_envelope(&a).unwrap();
        let d = decompose_roots(&a, &env, &masa_line()).unwrap();
        let mut engine = ConnectionEngine::new(&a, &d, false);
        let two = rf(vec![2]);
        let theta = engine
            .dotplus(
                &SymbolicRoot::RootT(two.clone()),
                &SymbolicRoot::RootT(two.neg()),
            )
            .unwrap();
        assert_eq!(theta, SymbolicRoot::Theta(two.clone()));
        let absorbed = engine
            .dotplus(&theta, &SymbolicRoot::RootT(two.clone()))
            .unwrap();
        assert_eq!(absorbed, SymbolicRoot::RootT(two.clone()));
        let zeroed = engine
            .dotplus(&theta, &SymbolicRoot::Zero(rf(vec![0])))
            .unwrap();
        assert!(zeroed.is_zero());
        assert!(engine
            .dotplus(&SymbolicRoot::Zero(rf(vec![0])), &SymbolicRoot::RootT(two))
            .is_err());
    }

    #[test]
    fn sl2_roots_are_connected_with_shortest_chains() {
        let a = sl2();
        let env = build_envelope(&a).unwrap();
        let d = decompose_roots(&a, &env, &masa_line()).unwrap();
        let mut engine = ConnectionEngine::new(&a, &d, false);
        let two = rf(vec![2]);
        let chain = engine.is_connected(&two, &two.neg()).unwrap().unwrap();
        assert_eq!(chain.entries, vec![two.clone()]);
        assert_eq!(chain.target_sign, -1);
        assert_eq!(chain.target_power, 0);
        engine.verify_chain(&chain, &two, &two.neg()).unwrap();
        let reflexive = engine.is_connected(&two, &two).unwrap().unwrap();
        assert_eq!(reflexive.target_sign, 1);
    }

    #[test]
    fn sl2_decomposition_is_one_full_ideal() {
        let a = sl2();
        let env = build_envelope(&a).unwrap();
        let d = decompose_roots(&a, &env, &masa_line()).unwrap();
        let dec = decompose(&a, &d, false).unwrap();
        for c in &dec.certificates {
            assert!(c.pass(), "{}: {:?}", c.name, c.violation);
        }
        assert_eq!(dec.classes.len(), 1);
        assert_eq!(dec.ideals[0].total.dim(), 3);
        assert_eq!(dec.ideals[0].t0_part.dim(), 1);
        assert!(dec
            .ideals[0]
            .t0_part
            .contains_vector(&unit_vector(q(), 3, 2)));
        assert!(dec.complement_u.is_zero());
        assert!(dec.corollary_direct_sum);
        assert_eq!(dec.t0_lambda.dim(), 1);
    }

    fn two_blocks(phi: Matrix) -> (GradedAlgebra, Masa) {
        let mut entries = sl2_entries(0);
        entries.extend(sl2_entries(3));
        let a = algebra(6, entries, phi);
        (a, Masa::new(vec![]))
    }

    fn block_masa(a: &GradedAlgebra) -> Masa {
        let env = build_envelope(a).unwrap();
        let pairs = env.mult().op_pairs().to_vec();
        let m = env.even_dim();
        let p1 = pairs.iter().position(|&p| p == (0, 1)).unwrap();
        let p2 = pairs.iter().position(|&p| p == (3, 4)).unwrap();
        let mut h1 = vec_zero(q(), m);
        h1[p1] = q().one();
        let mut h2 = vec_zero(q(), m);
        h2[p2] = q().one();
        Masa::new(vec![h1, h2])
    }

    #[test]
    fn two_blocks_give_two_classes_and_two_ideals() {
        let (a, _) = two_blocks(Matrix::identity(q(), 6));
        let masa = block_masa(&a);
        let env = build_envelope(&a).unwrap();
        let d = decompose_roots(&a, &env, &masa).unwrap();
        let mut engine = ConnectionEngine::new(&a, &d, false);
        let alpha = rf(vec![2, 0]);
        let beta = rf(vec![0, 2]);
        assert!(engine.t_alpha_beta(&alpha, &beta).is_zero());
        assert!(engine.is_connected(&alpha, &beta).unwrap().is_none());
        let theta_route = engine
            .dotplus(
                &SymbolicRoot::Theta(alpha.clone()),
                &SymbolicRoot::RootT(beta.clone()),
            )
            .unwrap();
        assert!(theta_route.is_zero());
        let dec = decompose(&a, &d, false).unwrap();
        for c in &dec.certificates {
            assert!(c.pass(), "{}: {:?}", c.name, c.violation);
        }
        assert_eq!(dec.classes.len(), 2);
        assert!(dec.corollary_direct_sum);
        for ideal in &dec.ideals {
            assert_eq!(ideal.total.dim(), 3);
        }
        assert!(dec.complement_u.is_zero());
    }

    #[test]
    fn swap_automorphism_merges_the_two_classes() {
        let mut phi = Matrix::zero(q(), 6, 6);
        for i in 0..3 {
            *phi.at_mut(i, i + 3) = q().one();
            *phi.at_mut(i + 3, i) = q().one();
        }
        let (a, _) = two_blocks(phi);
        let masa = block_masa(&a);
        let env = build_envelope(&a).unwrap();
        let d = decompose_roots(&a, &env, &masa).unwrap();
        let dec = decompose(&a, &d, false).unwrap();
        for c in &dec.certificates {
            assert!(c.pass(), "{}: {:?}", c.name, c.violation);
        }
        assert_eq!(dec.classes.len(), 1);
        assert_eq!(dec.ideals[0].total.dim(), 6);
        // the merge happens through the reflexive transport rule
        let mut engine = ConnectionEngine::new(&a, &d, false);
        let chain = engine
            .is_connected(&rf(vec![2, 0]), &rf(vec![0, 2]))
            .unwrap()
            .unwrap();
        assert_eq!(chain.entries.len(), 1);
        assert_eq!(chain.target_power, 1);
    }

    #[test]
    fn dead_line_goes_to_the_complement_and_unsets_the_corollary() {
        let entries = sl2_entries(0);
        let a = algebra(4, entries, Matrix::identity(q(), 4));
        let env = build_envelope(&a).unwrap();
        let masa = Masa::new(vec![vec![q().one(), q().zero(), q().zero()]]);
        let d = decompose_roots(&a, &env, &masa).unwrap();
        assert_eq!(d.t_zero().dim(), 2);
        let dec = decompose(&a, &d, false).unwrap();
        for c in &dec.certificates {
            assert!(c.pass(), "{}: {:?}", c.name, c.violation);
        }
        assert_eq!(dec.classes.len(), 1);
        assert_eq!(dec.ideals[0].total.dim(), 3);
        assert_eq!(dec.complement_u.dim(), 1);
        assert!(dec.complement_u.contains_vector(&unit_vector(q(), 4, 3)));
        assert!(!dec.corollary_direct_sum, "annihilator is nonzero here");
    }

    #[test]
    fn hom_route_matches_the_companion_route() {
        let phi = Matrix::from_i64(
            q(),
            vec![vec![-1, 0, 0], vec![0, -1, 0], vec![0, 0, 1]],
        );
        let plain = algebra(3, sl2_entries(0), phi);
        let hom = plain.homify().unwrap();
        let env = build_envelope(&hom).unwrap();
        let masa = masa_line();
        let d = decompose_roots(&hom, &env, &masa).unwrap();
        let dec = decompose_hom(&hom, &d, &masa, false).unwrap();
        for c in &dec.certificates {
            assert!(c.pass(), "{}: {:?}", c.name, c.violation);
        }
        assert_eq!(dec.classes.len(), 1);
        assert_eq!(dec.ideals[0].total.dim(), 3);

        // and the plain algebra decomposes identically
        let env_p = build_envelope(&plain).unwrap();
        let dp = decompose_roots(&plain, &env_p, &masa).unwrap();
        let dec_p = decompose(&plain, &dp, false).unwrap();
        assert_eq!(dec.classes, dec_p.classes);
        assert_eq!(dec.ideals[0].total, dec_p.ideals[0].total);
        assert_eq!(dec.t0_lambda, dec_p.t0_lambda);
    }

    #[test]
    fn wide_product_space_contains_the_strict_one() {
        let a = sl2();
        let env = build_envelope(&a).unwrap();
        let d = decompose_roots(&a, &env, &masa_line()).unwrap();
        let two = rf(vec![2]);
        let mut strict = ConnectionEngine::new(&a, &d, false);
        let mut wide = ConnectionEngine::new(&a, &d, true);
        let s = strict.t_alpha_beta(&two, &two);
        let w = wide.t_alpha_beta(&two, &two);
        assert!(w.contains(&s));
    }

    #[test]
    fn identity_automorphism_hom_flavor_agrees_with_plain() {
        let plain = sl2();
        let hom = plain.homify().unwrap();
        let env = build_envelope(&hom).unwrap();
        let masa = masa_line();
        let d = decompose_roots(&hom, &env, &masa).unwrap();
        let dec_hom = decompose_hom(&hom, &d, &masa, false).unwrap();
        let env_p = build_envelope(&plain).unwrap();
        let dp = decompose_roots(&plain, &env_p, &masa).unwrap();
        let dec_p = decompose(&plain, &dp, false).unwrap();
        assert_eq!(dec_hom.classes, dec_p.classes);
        assert_eq!(dec_hom.complement_u, dec_p.complement_u);
        assert!(dec_hom.all_pass());
    }
}
