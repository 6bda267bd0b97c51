//! End-to-end acceptance run. Each test prints its verdict line, so
//! `cargo test --test acceptance -- --nocapture` reads as a checklist.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, resume_unwind, UnwindSafe};

use split3::connect::{decompose, decompose_hom, ConnectionEngine};
use split3::descent::{
    binary_structure_from_entries, descend, intrinsic_l_classes, l_transport_permutes,
    partition_refines, reconstruct_from_lie, root_multiplicativity, BinaryColorAlgebra,
    ReconstructError,
};
use split3::envelope::{build_envelope, check_embedding_isomorphism};
use split3::field::FieldSpec;
use split3::fixtures;
use split3::grading::{Bicharacter, GradingGroup};
use split3::linalg::Matrix;
use split3::pipeline::{analyze, reconstruct_report, AnalysisOptions};
use split3::roots::{check_root_properties, decompose_roots, RootFunctional};

use common::*;

fn criterion(n: usize, name: &str, body: impl FnOnce() + UnwindSafe) {
    let result = catch_unwind(body);
    let verdict = if result.is_ok() { "PASS" } else { "FAIL" };
    println!("acceptance criterion {n} ({name}): {verdict}");
    if let Err(cause) = result {
        resume_unwind(cause);
    }
}

const PLAIN: [&str; 8] = [
    "sl2",
    "sl2-signed",
    "sl2x2",
    "sl2x2-swap",
    "sign2",
    "sl2-zero",
    "zero2",
    "sl2i",
];

const HOM: [&str; 4] = ["sl2-hom", "sl2x2-swap-hom", "sign2-hom", "zero2-hom"];

const SL2_BASED: [&str; 8] = [
    "sl2",
    "sl2-signed",
    "sl2-hom",
    "sl2x2",
    "sl2x2-swap",
    "sl2x2-swap-hom",
    "sl2-zero",
    "sl2i",
];

fn q() -> FieldSpec {
    FieldSpec::rationals()
}

fn rf(vals: Vec<i64>) -> RootFunctional {
    RootFunctional::new(vals.into_iter().map(|k| q().integer(k)).collect())
}

#[test]
fn criterion_01_identity_suite() {
    criterion(1, "defining identity on the base fixture and its twist", || {
        let doc = load("sl2");
        let a = doc.ternary().unwrap();
        let check = a.check_identity();
        assert!(check.pass());
        assert_eq!(check.tuples_checked, 243, "five slots over three dimensions");
        assert!(naive_identity_violation(a).is_none());

        let homified = load("sl2-signed").ternary().unwrap().homify().unwrap();
        assert!(homified.check_identity().pass());
        assert!(naive_identity_violation(&homified).is_none());

        let bundled = load("sl2-hom");
        assert!(bundled.ternary().unwrap().check_identity().pass());
        assert!(naive_identity_violation(bundled.ternary().unwrap()).is_none());

        // a corrupted coefficient must be caught by both evaluations
        let broken_text = fixtures::fixture("sl2")
            .unwrap()
            .text
            .replace("[0, 1, 0, 0, 2]", "[0, 1, 0, 0, 3]");
        let broken = split3::io::parse_input(&broken_text).unwrap();
        let b = broken.ternary().unwrap();
        assert!(!b.check_identity().pass());
        assert!(naive_identity_violation(b).is_some());
    });
}

#[test]
fn criterion_02_twist_round_trip_and_embedding_isomorphism() {
    criterion(2, "twist round trip and twisted embedding isomorphism", || {
        for name in PLAIN {
            let doc = load(name);
            let a = doc.ternary().unwrap();
            let h = a.homify().unwrap();
            let back = h.dehomify().unwrap();
            assert_eq!(back.structure(), a.structure(), "{name}: structure must return bit-exact");
            assert_eq!(back.phi(), a.phi(), "{name}: map must return bit-exact");
            assert_eq!(back.flavor(), a.flavor(), "{name}: flavor must return");
        }
        for name in ["sl2-signed", "sign2"] {
            let h = load(name).ternary().unwrap().homify().unwrap();
            let cert = check_embedding_isomorphism(&h).unwrap();
            assert!(cert.products_checked > 0, "{name}: isomorphism must compare products");
        }
    });
}

#[test]
fn criterion_03_operator_algebra_laws_rederived() {
    criterion(3, "operator color laws, closure and the mixed law", || {
        for name in fixtures::ternary_names() {
            let doc = load(&name);
            let a = doc.ternary().unwrap();
            let env = build_envelope(a).unwrap();
            let mult = env.mult();
            assert!(mult.color_law_violation().is_none(), "{name}: operator laws");
            assert!(env.color_law_violation().is_none(), "{name}: paired space laws");

            // closure, recomputed: the twisted commutator of any two inner
            // operators must stay inside the span of all inner operators
            let n = a.dim();
            let spec = a.field();
            let mut flat = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    flat.push(a.ad_basis(i, j).flatten());
                }
            }
            let ad_span = split3::linalg::Subspace::from_rows(spec, n * n, flat);
            let hom = a.flavor().is_hom();
            let splice = a.phi_inv().cloned();
            for i in 0..n {
                for j in 0..n {
                    let lhs_deg = a.group().add(a.deg(i), a.deg(j));
                    let p = a.ad_basis(i, j);
                    for k in 0..n {
                        for l in 0..n {
                            let rhs_deg = a.group().add(a.deg(k), a.deg(l));
                            let sign = a.eps(&lhs_deg, &rhs_deg);
                            let r = a.ad_basis(k, l);
                            let bracket = if hom {
                                let m = splice.as_ref().unwrap();
                                p.matmul(m).matmul(&r).sub(&r.matmul(m).matmul(&p).scale(&sign))
                            } else {
                                p.matmul(&r).sub(&r.matmul(&p).scale(&sign))
                            };
                            assert!(
                                ad_span.contains_vector(&bracket.flatten()),
                                "{name}: bracket of ({i},{j}) and ({k},{l}) escapes the span"
                            );
                            // the mixed law identifies that bracket with inner
                            // operators of bracketed arguments
                            if !hom {
                                let unit = |m: usize| {
                                    let mut v = vec![spec.zero(); n];
                                    v[m] = spec.one();
                                    v
                                };
                                let t1 = a.ad_operator(&a.bracket_unit(i, j, k), &unit(l));
                                let t2 = a.ad_operator(&unit(k), &a.bracket_unit(i, j, l));
                                let eps_k = a.eps(&lhs_deg, a.deg(k));
                                let rhs = t1.add(&t2.scale(&eps_k));
                                assert_eq!(
                                    bracket, rhs,
                                    "{name}: mixed law fails at ({i},{j}) on ({k},{l})"
                                );
                            }
                        }
                    }
                }
            }
        }
    });
}

#[test]
fn criterion_04_root_systems_and_their_properties() {
    criterion(4, "root systems, property suite and twist correspondence", || {
        let (_, _, d) = prepared("sl2");
        let expected: BTreeSet<RootFunctional> = [rf(vec![2]), rf(vec![-2])].into();
        let found: BTreeSet<RootFunctional> = d.lambda_t().into_iter().collect();
        assert_eq!(found, expected);
        assert_eq!(d.t_zero().dim(), 1);
        assert_eq!(d.t_space(&rf(vec![2])).dim(), 1);
        assert_eq!(d.t_space(&rf(vec![-2])).dim(), 1);

        for name in fixtures::ternary_names() {
            let (a, env, d) = prepared(&name);
            let suite = check_root_properties(&a, &env, &d);
            assert!(!suite.is_empty());
            for p in &suite {
                assert!(p.pass(), "{name}: {} ({:?})", p.name, p.violation);
            }
        }

        // the twisted record and its untwisted companion split identically
        for name in HOM {
            let doc = load(name);
            let a = doc.ternary().unwrap();
            let env = build_envelope(a).unwrap();
            let d = decompose_roots(a, &env, &masa_of(&doc, a, &env)).unwrap();

            let b = a.dehomify().unwrap();
            let env_b = build_envelope(&b).unwrap();
            let d_b = decompose_roots(&b, &env_b, &masa_of(&doc, &b, &env_b)).unwrap();

            assert_eq!(d.lambda_t(), d_b.lambda_t(), "{name}: module roots differ");
            assert_eq!(d.t_zero(), d_b.t_zero(), "{name}: zero spaces differ");
            for f in d.lambda_t() {
                assert_eq!(d.t_space(&f), d_b.t_space(&f), "{name}: space of {f} differs");
            }
        }
    });
}

#[test]
fn criterion_05_symbolic_sum_laws_and_equivalence() {
    criterion(5, "symbolic sum laws and connection as an equivalence", || {
        for name in fixtures::ternary_names() {
            let (a, _, d) = prepared(&name);
            let mut engine = ConnectionEngine::new(&a, &d, false);
            for p in engine.check_dotplus_properties().unwrap() {
                assert!(p.pass(), "{name}: {} ({:?})", p.name, p.violation);
            }
            let roots = d.lambda_t();
            let mut conn = vec![vec![false; roots.len()]; roots.len()];
            for (i, alpha) in roots.iter().enumerate() {
                for (j, beta) in roots.iter().enumerate() {
                    let chain = engine.is_connected(alpha, beta).unwrap();
                    if let Some(c) = &chain {
                        engine.verify_chain(c, alpha, beta).unwrap();
                    }
                    conn[i][j] = chain.is_some();
                }
            }
            for i in 0..roots.len() {
                assert!(conn[i][i], "{name}: reflexivity fails at {}", roots[i]);
                for j in 0..roots.len() {
                    assert_eq!(conn[i][j], conn[j][i], "{name}: symmetry fails");
                    for k in 0..roots.len() {
                        if conn[i][j] && conn[j][k] {
                            assert!(conn[i][k], "{name}: transitivity fails");
                        }
                    }
                }
            }
        }
    });
}

#[test]
fn criterion_06_decomposition_theorems() {
    criterion(6, "ideal decomposition with and without the twist", || {
        let cases: [(&str, usize, bool, usize); 3] = [
            ("sl2", 1, true, 0),
            ("sl2x2", 2, true, 0),
            ("sl2-zero", 1, false, 1),
        ];
        for (name, classes, corollary, complement) in cases {
            let doc = load(name);
            for twisted in [false, true] {
                let a = if twisted {
                    doc.ternary().unwrap().homify().unwrap()
                } else {
                    doc.ternary().unwrap().clone()
                };
                let env = build_envelope(&a).unwrap();
                let d = decompose_roots(&a, &env, &masa_of(&doc, &a, &env)).unwrap();
                let dec = decompose(&a, &d, false).unwrap();
                assert!(dec.all_pass(), "{name} twisted={twisted}");
                assert_eq!(dec.classes.len(), classes, "{name} twisted={twisted}");
                assert_eq!(dec.corollary_direct_sum, corollary, "{name} twisted={twisted}");
                assert_eq!(dec.complement_u.dim(), complement, "{name} twisted={twisted}");
                let covered: usize = dec.ideals.iter().map(|i| i.total.dim()).sum();
                assert_eq!(
                    covered + dec.complement_u.dim(),
                    a.dim(),
                    "{name} twisted={twisted}: complement and ideals must cover the algebra"
                );
            }
        }
    });
}

#[test]
fn criterion_07_twisted_route_matches_the_companion() {
    criterion(7, "twisted decomposition equals the transported plain one", || {
        for name in HOM {
            let doc = load(name);
            let a = doc.ternary().unwrap();
            let env = build_envelope(a).unwrap();
            let masa = masa_of(&doc, a, &env);
            let d = decompose_roots(a, &env, &masa).unwrap();
            let dec = decompose_hom(a, &d, &masa, false).unwrap();
            assert!(dec.all_pass(), "{name}");

            let b = a.dehomify().unwrap();
            let env_b = build_envelope(&b).unwrap();
            let d_b = decompose_roots(&b, &env_b, &masa_of(&doc, &b, &env_b)).unwrap();
            let dec_b = decompose(&b, &d_b, false).unwrap();

            assert!(same_partition(&dec.classes, &dec_b.classes), "{name}: classes differ");
            assert_eq!(dec.t0_lambda, dec_b.t0_lambda, "{name}: interior differs");
            assert_eq!(dec.complement_u, dec_b.complement_u, "{name}: complement differs");
            assert_eq!(dec.corollary_direct_sum, dec_b.corollary_direct_sum, "{name}");
            for ideal in &dec.ideals {
                let cls: BTreeSet<_> = ideal.class.iter().cloned().collect();
                let twin = dec_b
                    .ideals
                    .iter()
                    .find(|i| i.class.iter().cloned().collect::<BTreeSet<_>>() == cls)
                    .unwrap_or_else(|| panic!("{name}: no companion ideal for the class"));
                assert_eq!(ideal.t0_part, twin.t0_part, "{name}: interior part differs");
                assert_eq!(ideal.v_part, twin.v_part, "{name}: root part differs");
                assert_eq!(ideal.total, twin.total, "{name}: ideal differs");
            }
        }
    });
}

#[test]
fn criterion_08_descent_to_the_operator_algebra() {
    criterion(8, "descended decomposition beside the intrinsic one", || {
        for name in fixtures::ternary_names() {
            let (a, env, d) = prepared(&name);
            let dec = if a.flavor().is_hom() {
                let doc = load(&name);
                decompose_hom(&a, &d, &masa_of(&doc, &a, &env), false).unwrap()
            } else {
                decompose(&a, &d, false).unwrap()
            };
            let des = descend(&a, &env, &d, &dec);
            for p in &des.certificates {
                assert!(p.pass(), "{name}: {} ({:?})", p.name, p.violation);
            }
        }

        let (a, env, d) = prepared("sl2x2");
        let dec = decompose(&a, &d, false).unwrap();
        let des = descend(&a, &env, &d, &dec);
        assert!(l_transport_permutes(&d));
        let descended: Vec<Vec<RootFunctional>> = des
            .l_class_roots
            .iter()
            .filter(|c| !c.is_empty())
            .cloned()
            .collect();
        let (refines, equal) = partition_refines(&intrinsic_l_classes(&d), &descended);
        assert!(refines && equal, "intrinsic and descended partitions must agree");

        for name in SL2_BASED {
            let (_, env, d) = prepared(name);
            let (holds, pairs) = root_multiplicativity(env.mult(), &d);
            assert!(holds, "{name}: first dead pair {:?}", pairs.first().map(|(x, y)| (x.to_string(), y.to_string())));
        }

        let rec = reconstruct_from_lie(load("binary-sl2").binary().unwrap()).unwrap();
        for p in &rec.certificates {
            assert!(p.pass(), "{} ({:?})", p.name, p.violation);
        }
        let sl2 = load("sl2");
        assert_eq!(
            rec.algebra.structure(),
            sl2.ternary().unwrap().structure(),
            "reconstruction must be bit-exact"
        );

        let spec = q();
        let group = GradingGroup::trivial();
        let abelian = BinaryColorAlgebra {
            field: spec,
            group: group.clone(),
            eps: Bicharacter::trivial(spec, 0),
            basis_names: vec!["a".into(), "b".into()],
            degrees: vec![group.zero(); 2],
            structure: binary_structure_from_entries(Vec::new()),
            phi: Matrix::identity(spec, 2),
        };
        match reconstruct_from_lie(&abelian) {
            Err(ReconstructError::NotPerfect { dim }) => assert_eq!(dim, 0),
            other => panic!("abelian input must be rejected as not perfect, got {other:?}"),
        }
    });
}

#[test]
fn criterion_09_oracle_equivalence() {
    criterion(9, "span expander and chain enumeration agree", || {
        for name in fixtures::ternary_names() {
            let (a, _, d) = prepared(&name);
            let mut engine = ConnectionEngine::new(&a, &d, false);
            let roots = d.lambda_t();
            for alpha in &roots {
                assert_eq!(
                    engine.t0_alpha(alpha),
                    naive_t0_alpha(&a, &d, alpha),
                    "{name}: interior space of {alpha} disagrees with the expander"
                );
                for beta in &roots {
                    assert_eq!(
                        engine.t_alpha_beta(alpha, beta),
                        naive_t_alpha_beta(&a, &d, alpha, beta, false),
                        "{name}: pair space of ({alpha}, {beta}) disagrees"
                    );
                }
            }
            if roots.len() <= 4 {
                let classes = engine.connection_classes().unwrap();
                let naive = naive_classes(&a, &d, false);
                assert!(
                    same_partition(&classes, &naive),
                    "{name}: chain enumeration partitions differently"
                );
            }
        }

        // spot check the widened variant as well
        let (a, _, d) = prepared("sl2");
        let mut wide_engine = ConnectionEngine::new(&a, &d, true);
        let two = rf(vec![2]);
        assert_eq!(
            wide_engine.t_alpha_beta(&two, &two),
            naive_t_alpha_beta(&a, &d, &two, &two, true)
        );
    });
}

#[test]
fn criterion_10_deterministic_reports() {
    criterion(10, "byte-identical reports on repeated runs", || {
        let opts = AnalysisOptions::default();
        for name in fixtures::ternary_names() {
            let first = analyze(&load(&name), &opts).to_json_string();
            let second = analyze(&load(&name), &opts).to_json_string();
            assert_eq!(first, second, "{name}: analysis must be deterministic");
        }
        let first = reconstruct_report(&load("binary-sl2")).to_json_string();
        let second = reconstruct_report(&load("binary-sl2")).to_json_string();
        assert_eq!(first, second);
    });
}
