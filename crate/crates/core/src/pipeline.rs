//! Staged analysis driver shared by the command line and the bindings.
//!
//! Stages run in a fixed order, each one feeding the next: validate, embed,
//! roots, decompose, lpass. Asking for a later stage runs everything before
//! it; when a stage fails, the requested stages after it are reported as
//! inconclusive rather than silently dropped.

use std::time::Instant;

use serde_json::{json, Map, Value};

use crate::algebra::{Flavor, GradedAlgebra, SimplicityVerdict, DEFAULT_NODE_BUDGET};
use crate::connect::{decompose, decompose_hom, Decomposition};
use crate::descent::{
    descend, intrinsic_l_classes, l_transport_permutes, partition_refines, reconstruct_from_lie,
    root_multiplicativity,
};
use crate::envelope::{build_envelope, check_embedding_isomorphism, Envelope};
use crate::io::{HintSpec, InputDoc, MasaEntry};
use crate::report::{root_graph, Kind, Report, Status};
use crate::roots::{
    check_root_properties, decompose_roots, masa_search, Masa, RootDecomposition, RootFunctional,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Validate,
    Embed,
    Roots,
    Decompose,
    Lpass,
}

impl Stage {
    pub const ALL: [Stage; 5] = [
        Stage::Validate,
        Stage::Embed,
        Stage::Roots,
        Stage::Decompose,
        Stage::Lpass,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Validate => "validate",
            Stage::Embed => "embed",
            Stage::Roots => "roots",
            Stage::Decompose => "decompose",
            Stage::Lpass => "lpass",
        }
    }

    pub fn parse(s: &str) -> Option<Stage> {
        Stage::ALL.into_iter().find(|st| st.name() == s)
    }
}

#[derive(Debug, Clone)]
pub struct AnalysisOptions {
    /// Last stage to run; everything before it runs as a prerequisite.
    pub upto: Stage,
    /// Widen the paired product spaces by all slot permutations.
    pub wide: bool,
    /// Cross-check twisted inputs through the untwisted companion.
    /// Unset means on; the record's own options are the fallback.
    pub via_dehom: Option<bool>,
    /// Search cap for the no-proper-ideal diagnostic.
    pub node_budget: usize,
    /// Replaces the record's operator family when set.
    pub masa_override: Option<Vec<MasaEntry>>,
}

impl Default for AnalysisOptions {
    fn default() -> AnalysisOptions {
        AnalysisOptions {
            upto: Stage::Lpass,
            wide: false,
            via_dehom: None,
            node_budget: DEFAULT_NODE_BUDGET,
            masa_override: None,
        }
    }
}

fn skip_from(report: &mut Report, from: Stage, upto: Stage, reason: &str) {
    for s in Stage::ALL {
        if s >= from && s <= upto {
            report.skip_stage(s.name(), reason);
        }
    }
}

fn root_strings(roots: &[RootFunctional]) -> Vec<String> {
    roots.iter().map(RootFunctional::to_string).collect()
}

/// Runs the analysis stages on a ternary record and reports every
/// certificate, diagnostic and derived fact.
pub fn analyze(doc: &InputDoc, opts: &AnalysisOptions) -> Report {
    let mut report = Report::new();
    let Some(a) = doc.ternary() else {
        report.certificate(
            "validate",
            "the record describes a ternary algebra",
            Some("binary records go through reconstruction".into()),
        );
        return report;
    };
    let wide = opts.wide || doc.options.talphabeta_wide;
    let via_dehom = opts.via_dehom.or(doc.options.via_dehom).unwrap_or(true);

    // ---------------------------------------------------------------- validate
    let st = "validate";
    let t = Instant::now();
    report.fact(st, "dimension", json!(a.dim()));
    report.fact(st, "field_order", json!(a.field().order()));
    report.fact(st, "flavor", json!(a.flavor().as_str()));
    report.fact(st, "group_orders", json!(a.group().orders()));

    let eps_violations = a.bicharacter().validate(a.group());
    report.certificate(
        st,
        "the commutation factor is a skew-symmetric bicharacter",
        eps_violations.first().map(|v| format!("{v:?}")),
    );

    let grading = a.check_grading();
    report.certificate(
        st,
        "products land in the sum of the input degrees",
        grading
            .violations
            .first()
            .map(|(i, j, k, l)| format!("entry ({i}, {j}, {k}) -> {l} mixes degrees")),
    );

    let auto = a.check_automorphism();
    let witness = if !auto.invertible {
        Some("the designated map is singular".to_string())
    } else if let Some((l, i)) = auto.even_violations.first() {
        Some(format!("basis element {i} is mapped across degrees (row {l})"))
    } else {
        auto.homomorphism_violations
            .first()
            .map(|t| format!("the map fails to carry the product at basis triple {t:?}"))
    };
    report.certificate(st, "the designated map is an even automorphism", witness);

    let identity = a.check_identity();
    report.fact(st, "identity_tuples_checked", json!(identity.tuples_checked));
    report.certificate(
        st,
        "the defining identity holds on every basis tuple",
        identity
            .violations
            .first()
            .map(|v| format!("{} fails at {:?}", v.law, v.tuple)),
    );
    report.add_timing(st, t.elapsed().as_micros());

    let validate_ok = report.all_certificates_pass();
    if opts.upto == Stage::Validate {
        return report;
    }
    if !validate_ok {
        skip_from(&mut report, Stage::Embed, opts.upto, "validation failed");
        return report;
    }

    // ---------------------------------------------------------------- embed
    let st = "embed";
    let t = Instant::now();
    let closure_name = "the inner product operators close into a graded operator algebra";
    let env: Envelope = match build_envelope(a) {
        Ok(env) => {
            report.certificate(st, closure_name, None);
            env
        }
        Err(e) => {
            report.certificate(st, closure_name, Some(e.to_string()));
            report.add_timing(st, t.elapsed().as_micros());
            skip_from(
                &mut report,
                Stage::Roots,
                opts.upto,
                "the operator algebra could not be built",
            );
            return report;
        }
    };
    let mult = env.mult();
    report.fact(st, "operator_dimension", json!(mult.dim()));
    report.fact(st, "module_dimension", json!(env.odd_dim()));
    report.fact(
        st,
        "generating_pairs",
        json!(mult.op_pairs().iter().map(|&(i, j)| json!([i, j])).collect::<Vec<_>>()),
    );
    report.certificate(
        st,
        "operator products obey color antisymmetry and the color Jacobi law",
        mult.color_law_violation(),
    );
    report.certificate(
        st,
        "the paired space multiplies by the color laws",
        env.color_law_violation(),
    );
    report.certificate(
        st,
        "the induced map on the paired space is multiplicative",
        (!env.phi_is_multiplicative()).then(|| "some product is not carried over".to_string()),
    );
    report.certificate(
        st,
        "conjugation by the designated map preserves operator brackets",
        (!mult.phi_preserves_bracket()).then(|| "some bracket moves under conjugation".to_string()),
    );
    if a.flavor() == Flavor::HomLeibniz {
        let name = "the twisted and untwisted operator pairs are isomorphic";
        match check_embedding_isomorphism(a) {
            Ok(cert) => {
                report.certificate(st, name, None);
                report.fact(st, "isomorphism_products_checked", json!(cert.products_checked));
            }
            Err(e) => report.certificate(st, name, Some(e.to_string())),
        }
    }
    report.add_timing(st, t.elapsed().as_micros());

    if opts.upto == Stage::Embed {
        return report;
    }
    if !report.all_certificates_pass() {
        skip_from(&mut report, Stage::Roots, opts.upto, "the embedding failed");
        return report;
    }

    // ---------------------------------------------------------------- roots
    let st = "roots";
    let t = Instant::now();
    let entries = opts.masa_override.as_ref().or(doc.masa.as_ref());
    let family_name = "a maximal abelian family of grade-zero operators is available";
    let masa = match resolve_masa(a, &env, entries.map(Vec::as_slice), &doc.hints) {
        Ok((masa, searched)) => {
            report.certificate(st, family_name, None);
            if let Some(note) = searched {
                report.push(
                    st,
                    Kind::Diagnostic,
                    "no family was supplied; a search found one",
                    Status::Pass,
                    Some(note),
                );
            }
            masa
        }
        Err(msg) => {
            report.certificate(st, family_name, Some(msg));
            report.add_timing(st, t.elapsed().as_micros());
            skip_from(&mut report, Stage::Decompose, opts.upto, "no usable family");
            return report;
        }
    };
    report.fact(st, "masa_rank", json!(masa.rank()));
    let split_name = "the family acts diagonally with a common eigenbasis";
    let d: RootDecomposition = match decompose_roots(a, &env, &masa) {
        Ok(d) => {
            report.certificate(st, split_name, None);
            d
        }
        Err(e) => {
            report.certificate(st, split_name, Some(e.to_string()));
            report.add_timing(st, t.elapsed().as_micros());
            skip_from(&mut report, Stage::Decompose, opts.upto, "the family did not split");
            return report;
        }
    };
    report.fact(st, "module_roots", json!(root_strings(&d.lambda_t())));
    report.fact(st, "operator_roots", json!(root_strings(&d.lambda_l())));
    report.fact(
        st,
        "zero_space_dims",
        json!({ "module": d.t_zero().dim(), "operators": d.l_zero().dim() }),
    );
    let mut dims = Map::new();
    for f in d.lambda_t() {
        dims.insert(f.to_string(), json!(d.t_space(&f).dim()));
    }
    report.fact(st, "module_root_dims", Value::Object(dims));
    for p in check_root_properties(a, &env, &d) {
        report.certificate(st, p.name, p.violation);
    }
    report.add_timing(st, t.elapsed().as_micros());

    if opts.upto == Stage::Roots {
        return report;
    }
    if !report.all_certificates_pass() {
        skip_from(
            &mut report,
            Stage::Decompose,
            opts.upto,
            "the root spaces are not certified",
        );
        return report;
    }

    // ---------------------------------------------------------------- decompose
    let st = "decompose";
    let t = Instant::now();
    let hom = a.flavor().is_hom();
    let partition_name = "the connection relation partitions the nonzero roots";
    let dec_result = if hom && via_dehom {
        decompose_hom(a, &d, &masa, wide)
    } else {
        decompose(a, &d, wide)
    };
    let dec: Decomposition = match dec_result {
        Ok(dec) => dec,
        Err(e) => {
            report.certificate(st, partition_name, Some(e.to_string()));
            report.add_timing(st, t.elapsed().as_micros());
            skip_from(&mut report, Stage::Lpass, opts.upto, "no decomposition");
            return report;
        }
    };
    report.certificate(st, partition_name, None);
    for p in &dec.certificates {
        report.certificate(st, p.name.clone(), p.violation.clone());
    }
    report.fact(
        st,
        "classes",
        json!(dec.classes.iter().map(|c| root_strings(c)).collect::<Vec<_>>()),
    );
    report.fact(
        st,
        "ideal_dims",
        json!(dec
            .ideals
            .iter()
            .map(|i| json!({
                "interior": i.t0_part.dim(),
                "root_part": i.v_part.dim(),
                "total": i.total.dim(),
            }))
            .collect::<Vec<_>>()),
    );
    report.fact(st, "zero_interior_dim", json!(dec.t0_lambda.dim()));
    report.fact(st, "complement_dim", json!(dec.complement_u.dim()));
    report.fact(st, "direct_sum_corollary", json!(dec.corollary_direct_sum));
    report.fact(st, "cross_check_through_companion", json!(hom && via_dehom));

    // no-proper-ideal diagnostic; informative only
    let simple_name = "the algebra has no proper graded stable ideals";
    match a.is_simple(opts.node_budget) {
        Ok(rep) => {
            let (status, note) = match rep.verdict {
                SimplicityVerdict::Simple => (
                    Status::Pass,
                    format!(
                        "no proper ideal found; antisymmetrizer ideal dimension {}",
                        rep.antisym_ideal_dim
                    ),
                ),
                SimplicityVerdict::NotSimple { witness } => (
                    Status::Fail,
                    format!("a proper ideal of dimension {} exists", witness.dim()),
                ),
                SimplicityVerdict::Inconclusive { explored } => (
                    Status::Inconclusive,
                    format!("search stopped after {explored} candidate spans"),
                ),
            };
            report.push(st, Kind::Diagnostic, simple_name, status, Some(note));
        }
        Err(e) => report.push(
            st,
            Kind::Diagnostic,
            simple_name,
            Status::Inconclusive,
            Some(e.to_string()),
        ),
    }

    // root graph for the dot output
    let lambda = d.lambda_t();
    let nodes = root_strings(&lambda);
    let index_of = |f: &RootFunctional| lambda.iter().position(|g| g == f).expect("root is known");
    let mut class_of = vec![0usize; nodes.len()];
    let mut edges = Vec::new();
    for (ci, cls) in dec.classes.iter().enumerate() {
        let ids: Vec<usize> = cls.iter().map(index_of).collect();
        for &i in &ids {
            class_of[i] = ci;
        }
        for (a_pos, &i) in ids.iter().enumerate() {
            for &j in &ids[a_pos + 1..] {
                edges.push((i.min(j), i.max(j)));
            }
        }
    }
    edges.sort_unstable();
    report.set_graph(root_graph(&nodes, &class_of, &edges));
    report.add_timing(st, t.elapsed().as_micros());

    if opts.upto == Stage::Decompose {
        return report;
    }
    if !report.all_certificates_pass() {
        skip_from(
            &mut report,
            Stage::Lpass,
            opts.upto,
            "the decomposition is not certified",
        );
        return report;
    }

    // ---------------------------------------------------------------- lpass
    let st = "lpass";
    let t = Instant::now();
    let des = descend(a, &env, &d, &dec);
    for p in &des.certificates {
        report.certificate(st, p.name.clone(), p.violation.clone());
    }
    report.fact(
        st,
        "class_operator_roots",
        json!(des.l_class_roots.iter().map(|c| root_strings(c)).collect::<Vec<_>>()),
    );
    report.fact(
        st,
        "image_dims",
        json!(des.ad_images.iter().map(|s| s.dim()).collect::<Vec<_>>()),
    );
    report.fact(
        st,
        "operator_complement_dim",
        json!(des.complement_u_prime.dim()),
    );

    let (holds, witnesses) = root_multiplicativity(env.mult(), &d);
    report.push(
        st,
        Kind::Diagnostic,
        "nonzero root pairs multiply to nonzero operators",
        if holds { Status::Pass } else { Status::Fail },
        witnesses
            .first()
            .map(|(x, y)| format!("all products of the root spaces of {x} and {y} vanish")),
    );

    let intrinsic_name = "chains inside the operator roots reproduce the descended classes";
    if l_transport_permutes(&d) {
        let intrinsic = intrinsic_l_classes(&d);
        let descended: Vec<Vec<RootFunctional>> = des
            .l_class_roots
            .iter()
            .filter(|c| !c.is_empty())
            .cloned()
            .collect();
        let (refines, equal) = partition_refines(&intrinsic, &descended);
        let (status, note) = if equal {
            (Status::Pass, "the partitions coincide".to_string())
        } else if refines {
            (
                Status::Pass,
                "the intrinsic partition strictly refines the descended one".to_string(),
            )
        } else {
            (
                Status::Fail,
                "the intrinsic partition does not refine the descended one".to_string(),
            )
        };
        report.push(st, Kind::Diagnostic, intrinsic_name, status, Some(note));
        report.fact(
            st,
            "intrinsic_operator_classes",
            json!(intrinsic.iter().map(|c| root_strings(c)).collect::<Vec<_>>()),
        );
    } else {
        report.push(
            st,
            Kind::Diagnostic,
            intrinsic_name,
            Status::Inconclusive,
            Some("the transport does not permute the operator roots".to_string()),
        );
    }
    report.add_timing(st, t.elapsed().as_micros());

    report
}

fn resolve_masa(
    a: &GradedAlgebra,
    env: &Envelope,
    entries: Option<&[MasaEntry]>,
    hints: &HintSpec,
) -> Result<(Masa, Option<String>), String> {
    let mult = env.mult();
    let m = mult.dim();
    match entries {
        Some(rows) => {
            let mut elements = Vec::with_capacity(rows.len());
            for (idx, entry) in rows.iter().enumerate() {
                match entry {
                    MasaEntry::AdPair(i, j) => {
                        let op = a.ad_basis(*i, *j);
                        let coords = mult.coords_of(&op).ok_or_else(|| {
                            format!(
                                "masa[{idx}]: the operator of pair ({i}, {j}) lies outside the operator algebra"
                            )
                        })?;
                        elements.push(coords);
                    }
                    MasaEntry::OpCoords(v) => {
                        if v.len() != m {
                            return Err(format!(
                                "masa[{idx}]: expected {m} operator coordinates, found {}",
                                v.len()
                            ));
                        }
                        elements.push(v.clone());
                    }
                }
            }
            let hint_rows = hints.for_family(elements.len());
            if !hint_rows.is_empty() && hint_rows.len() != elements.len() {
                return Err(format!(
                    "eigen_hints: expected one list per masa element ({}), found {}",
                    elements.len(),
                    hint_rows.len()
                ));
            }
            Ok((Masa::with_hints(elements, hint_rows), None))
        }
        None => {
            let (family, complete) = masa_search(env, Vec::new(), &hints.flat());
            if !complete {
                return Err(
                    "no family was supplied and the search stalled; pass one explicitly".into(),
                );
            }
            let note = format!("{} commuting diagonalizable operators", family.len());
            let hint_rows = hints.for_family(family.len());
            Ok((Masa::with_hints(family, hint_rows), Some(note)))
        }
    }
}

/// Certifies a binary record and rebuilds its ternary product.
pub fn reconstruct_report(doc: &InputDoc) -> Report {
    let mut report = Report::new();
    let st = "reconstruct";
    let t = Instant::now();
    let Some(b) = doc.binary() else {
        report.certificate(
            st,
            "the record has arity 2",
            Some("ternary records go through the analysis stages".into()),
        );
        return report;
    };
    let axiom_name = "the record is a perfect color algebra with an automorphism";
    match reconstruct_from_lie(b) {
        Err(e) => report.certificate(st, axiom_name, Some(e.to_string())),
        Ok(rec) => {
            report.certificate(st, axiom_name, None);
            for p in &rec.certificates {
                report.certificate(st, p.name.clone(), p.violation.clone());
            }
            report.fact(st, "dimension", json!(rec.algebra.dim()));
            report.fact(st, "flavor", json!(rec.algebra.flavor().as_str()));
            report.fact(st, "record", crate::io::render_ternary(&rec.algebra));
        }
    }
    report.add_timing(st, t.elapsed().as_micros());
    report
}

/// Searches for a maximal abelian operator family, seeded by the record's
/// own family when one is present.
pub fn masa_search_report(doc: &InputDoc) -> Report {
    let mut report = Report::new();
    let st = "masa-search";
    let t = Instant::now();
    let Some(a) = doc.ternary() else {
        report.certificate(
            st,
            "the record describes a ternary algebra",
            Some("binary records go through reconstruction".into()),
        );
        return report;
    };
    let env = match build_envelope(a) {
        Ok(env) => env,
        Err(e) => {
            report.certificate(st, "the operator algebra builds", Some(e.to_string()));
            return report;
        }
    };
    report.certificate(st, "the operator algebra builds", None);
    let seed = match doc.masa.as_deref() {
        None => Vec::new(),
        Some(rows) => match resolve_masa(a, &env, Some(rows), &HintSpec::None) {
            Ok((masa, _)) => masa.elements,
            Err(msg) => {
                report.certificate(st, "the supplied family resolves", Some(msg));
                return report;
            }
        },
    };
    let (family, complete) = masa_search(&env, seed, &doc.hints.flat());
    report.certificate(
        st,
        "the search reached a maximal abelian family",
        (!complete).then(|| {
            "every extension candidate failed the diagonalizability test".to_string()
        }),
    );
    report.fact(st, "rank", json!(family.len()));
    report.fact(
        st,
        "family",
        json!(family
            .iter()
            .map(|row| row.iter().map(|s| s.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>()),
    );
    report.add_timing(st, t.elapsed().as_micros());
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::report::Status;

    fn run(name: &str) -> Report {
        analyze(&fixtures::load(name), &AnalysisOptions::default())
    }

    #[test]
    fn the_full_run_on_sl2_passes_and_reports_one_class() {
        let report = run("sl2");
        assert!(report.all_certificates_pass(), "{}", report.to_text());
        assert_eq!(report.exit_code(), 0);
        let json = report.to_json();
        let classes = &json["facts"]["decompose"]["classes"];
        assert_eq!(classes.as_array().unwrap().len(), 1);
        assert_eq!(json["facts"]["decompose"]["direct_sum_corollary"], json!(true));
        assert_eq!(json["facts"]["roots"]["module_roots"].as_array().unwrap().len(), 2);
        let graph = report.graph().unwrap();
        assert!(graph.contains("--"));
    }

    #[test]
    fn every_ternary_fixture_passes_the_full_run() {
        for name in fixtures::ternary_names() {
            let report = run(name);
            assert!(
                report.all_certificates_pass(),
                "{name} failed:\n{}",
                report.to_text()
            );
        }
    }

    #[test]
    fn a_missing_family_is_searched_for() {
        let mut doc = fixtures::load("sl2");
        doc.masa = None;
        let report = analyze(&doc, &AnalysisOptions::default());
        assert!(report.all_certificates_pass(), "{}", report.to_text());
        assert!(report
            .entries()
            .iter()
            .any(|e| e.kind == Kind::Diagnostic && e.name.contains("search found one")));
    }

    #[test]
    fn missing_hints_fail_the_roots_stage_and_mark_the_rest_inconclusive() {
        let mut doc = fixtures::load("sl2i");
        doc.hints = HintSpec::None;
        let report = analyze(&doc, &AnalysisOptions::default());
        assert_eq!(report.exit_code(), 1);
        let entries = report.entries();
        assert!(entries
            .iter()
            .any(|e| e.stage == "roots" && e.status == Status::Fail));
        for stage in ["decompose", "lpass"] {
            assert!(entries
                .iter()
                .any(|e| e.stage == stage && e.status == Status::Inconclusive));
        }
    }

    #[test]
    fn twisted_inputs_cross_check_through_the_companion_by_default() {
        let report = run("sl2-hom");
        assert!(report.all_certificates_pass(), "{}", report.to_text());
        assert!(report
            .entries()
            .iter()
            .any(|e| e.name.contains("hold up against")));

        let opts = AnalysisOptions {
            via_dehom: Some(false),
            ..AnalysisOptions::default()
        };
        let direct = analyze(&fixtures::load("sl2-hom"), &opts);
        assert!(direct.all_certificates_pass(), "{}", direct.to_text());
        assert!(!direct
            .entries()
            .iter()
            .any(|e| e.name.contains("hold up against")));
    }

    #[test]
    fn the_zero_algebra_decomposes_into_nothing_but_complement() {
        let report = run("zero2");
        assert!(report.all_certificates_pass(), "{}", report.to_text());
        let json = report.to_json();
        assert_eq!(json["facts"]["decompose"]["complement_dim"], json!(2));
        assert_eq!(json["facts"]["decompose"]["direct_sum_corollary"], json!(false));
        assert_eq!(json["facts"]["decompose"]["classes"], json!([]));
    }

    #[test]
    fn the_padded_line_unsets_the_corollary_but_still_passes() {
        let report = run("sl2-zero");
        assert!(report.all_certificates_pass(), "{}", report.to_text());
        let json = report.to_json();
        assert_eq!(json["facts"]["decompose"]["complement_dim"], json!(1));
        assert_eq!(json["facts"]["decompose"]["direct_sum_corollary"], json!(false));
    }

    #[test]
    fn stage_subsets_stop_where_asked() {
        let opts = AnalysisOptions {
            upto: Stage::Validate,
            ..AnalysisOptions::default()
        };
        let report = analyze(&fixtures::load("sl2"), &opts);
        assert!(report.entries().iter().all(|e| e.stage == "validate"));
        assert!(report.all_certificates_pass());
    }

    #[test]
    fn repeated_runs_serialize_identically() {
        let a = run("sl2x2-swap-hom").to_json_string();
        let b = run("sl2x2-swap-hom").to_json_string();
        assert_eq!(a, b);
    }

    #[test]
    fn reconstruction_of_the_binary_record_round_trips() {
        let report = reconstruct_report(&fixtures::load("binary-sl2"));
        assert!(report.all_certificates_pass(), "{}", report.to_text());
        let json = report.to_json();
        let record = json["facts"]["reconstruct"]["record"].to_string();
        let rebuilt = crate::io::parse_input(&record).unwrap();
        let sl2 = fixtures::load("sl2");
        assert_eq!(
            rebuilt.ternary().unwrap().structure(),
            sl2.ternary().unwrap().structure()
        );
    }

    #[test]
    fn the_family_search_report_finds_the_sl2_line() {
        let mut doc = fixtures::load("sl2");
        doc.masa = None;
        let report = masa_search_report(&doc);
        assert!(report.all_certificates_pass(), "{}", report.to_text());
        assert_eq!(report.to_json()["facts"]["masa-search"]["rank"], json!(1));
    }

    #[test]
    fn binary_records_are_rejected_by_the_stage_driver() {
        let report = analyze(&fixtures::load("binary-sl2"), &AnalysisOptions::default());
        assert_eq!(report.exit_code(), 1);
    }
}
