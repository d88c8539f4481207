//! Acceptance checks, one test per criterion. Each prints a single
//! PASS/FAIL line; run with `--nocapture` to see the lines directly.

use std::path::PathBuf;
use std::time::Instant;

use fkh::complex::{build_complex, verify_dsquare, FrobeniusRule, FrobeniusTable};
use fkh::diagram::{KinkSign, TangleDiagram};
use fkh::homology::{compare_homology, homology};
use fkh::ring::{GaussianInt, LaurentPoly};
use fkh::rmatrix::{bracket_tensor, bracket_tensor_marked, check_matrix_identities, WeightTable};
use fkh::states::{enumerate_markers, smooth};
use fkh::statesum::{bracket_state_sum, bracket_via_ranks, kink_factor_check};
use fkh::Error;

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn load(name: &str) -> TangleDiagram {
    let path = corpus_dir().join(name);
    let text = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("read {}: {e}", path.display()));
    TangleDiagram::parse(&text).unwrap_or_else(|e| panic!("parse {name}: {e}"))
}

fn corpus() -> Vec<(String, TangleDiagram)> {
    let mut out: Vec<(String, TangleDiagram)> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .filter_map(|entry| {
            let path = entry.ok()?.path();
            (path.extension()? == "tang").then(|| {
                let name = path.file_name().unwrap().to_string_lossy().into_owned();
                (name.clone(), load(&name))
            })
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

fn report(n: usize, name: &str, ok: bool) {
    println!("criterion {n} ({name}): {}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} ({name}) failed");
}

fn pp(text: &str) -> LaurentPoly {
    text.parse().unwrap()
}

/// Independent route to a closed bracket: A^sigma times the loop value
/// to the number of circles, summed over markers.
fn delta_oracle(d: &TangleDiagram) -> LaurentPoly {
    let mut delta = LaurentPoly::zero();
    delta.add_term(2, -GaussianInt::ONE);
    delta.add_term(-2, -GaussianInt::ONE);
    let mut total = LaurentPoly::zero();
    for m in enumerate_markers(d) {
        let circles = smooth(d, &m).circle_count() as u32;
        total += &(delta.pow(circles) * LaurentPoly::var_pow(m.sigma()));
    }
    total
}

#[test]
fn criterion_1_pinned_bracket_values() {
    let closed = [
        ("unknot.tang", "-A^2 - A^-2"),
        ("kink_neg.tang", "A^-1 + A^-5"),
        ("kink_pos.tang", "A^5 + A"),
        ("unknot_r2.tang", "-A^2 - A^-2"),
        ("hopf.tang", "A^6 + A^2 + A^-2 + A^-6"),
        ("trefoil.tang", "A^7 + A^3 + A^-1 - A^-9"),
    ];
    let open = [
        ("strand.tang", "2"),
        ("arcmax.tang", "-i*A + i*A^-1"),
        ("arcmin.tang", "-i*A + i*A^-1"),
    ];
    let mut ok = true;
    for (file, expected) in closed {
        let d = load(file);
        let t0 = Instant::now();
        let got = bracket_state_sum(&d).value;
        let oracle = delta_oracle(&d);
        let fast = t0.elapsed().as_secs_f64() < 1.0;
        if got != pp(expected) || got != oracle || !fast {
            eprintln!("{file}: got {got}, pinned {expected}, oracle {oracle}, fast={fast}");
            ok = false;
        }
    }
    for (file, expected) in open {
        let d = load(file);
        let t0 = Instant::now();
        let got = bracket_state_sum(&d).value;
        let fast = t0.elapsed().as_secs_f64() < 1.0;
        if got != pp(expected) || !fast {
            eprintln!("{file}: got {got}, pinned {expected}, fast={fast}");
            ok = false;
        }
    }
    report(1, "pinned bracket values", ok);
}

#[test]
fn criterion_2_boundary_squares_to_zero_across_corpus() {
    let t0 = Instant::now();
    let mut ok = true;
    for (name, d) in corpus() {
        if d.crossing_count() > 6 {
            continue;
        }
        let cx = build_complex(&d);
        if let Err(e) = verify_dsquare(&cx.boundary_tangle()) {
            eprintln!("{name}: tangle rule: {e}");
            ok = false;
        }
        if d.is_closed() {
            match cx.boundary_link(&FrobeniusTable::standard()) {
                Ok(b) => {
                    if let Err(e) = verify_dsquare(&b) {
                        eprintln!("{name}: link rule: {e}");
                        ok = false;
                    }
                }
                Err(e) => {
                    eprintln!("{name}: link rule construction: {e}");
                    ok = false;
                }
            }
        }
    }
    let within_budget = t0.elapsed().as_secs_f64() < 30.0;
    if !within_budget {
        eprintln!("corpus sweep took {:?}", t0.elapsed());
    }
    report(2, "d squared is zero on the corpus", ok && within_budget);
}

#[test]
fn criterion_3_euler_characteristic_three_ways() {
    let mut ok = true;
    for (name, d) in corpus() {
        let direct = bracket_state_sum(&d).value;
        let cx = build_complex(&d);
        let from_chains = bracket_via_ranks(&cx);
        let h = match homology(&cx, &cx.boundary_tangle()) {
            Ok(h) => h,
            Err(e) => {
                eprintln!("{name}: homology: {e}");
                ok = false;
                continue;
            }
        };
        let from_homology = h.graded_euler();
        if direct != from_chains || direct != from_homology {
            eprintln!("{name}: state sum {direct}, chain ranks {from_chains}, homology {from_homology}");
            ok = false;
        }
    }
    report(3, "graded Euler characteristic agrees three ways", ok);
}

#[test]
fn criterion_4_tensor_contraction_matches_state_sums() {
    let mut ok = true;
    for (name, d) in corpus() {
        if !d.is_closed() {
            continue;
        }
        let direct = bracket_state_sum(&d).value;
        let tensor = bracket_tensor(&d).unwrap();
        if tensor != direct {
            eprintln!("{name}: tensor {tensor}, state sum {direct}");
            ok = false;
        }
        let mut total = LaurentPoly::zero();
        for m in enumerate_markers(&d) {
            let slice = bracket_tensor_marked(&d, &m).unwrap();
            let mut per_marker = LaurentPoly::zero();
            for e in smooth(&d, &m).enhance() {
                per_marker.add_term(e.q, fkh::ring::phase(e.p));
            }
            if slice != per_marker {
                eprintln!("{name}: marker {m}: tensor slice {slice}, state sum {per_marker}");
                ok = false;
            }
            total += &slice;
        }
        if total != tensor {
            eprintln!("{name}: marked slices sum to {total}, tensor {tensor}");
            ok = false;
        }
    }
    report(4, "tensor and marked tensor match the state sum", ok);
}

#[test]
fn criterion_5_crossing_matrix_identities() {
    let t = WeightTable::standard();
    let mut ok = check_matrix_identities(&t);
    // The product check again, straight from the stored entries.
    for i in 0..4 {
        for k in 0..4 {
            let mut acc = LaurentPoly::zero();
            for j in 0..4 {
                acc += &(&t.r[i][j] * &t.b[j][k]);
            }
            let expect = if i == k {
                LaurentPoly::one()
            } else {
                LaurentPoly::zero()
            };
            if acc != expect {
                eprintln!("(R R^-1)[{i}][{k}] = {acc}");
                ok = false;
            }
        }
    }
    report(5, "crossing matrices invert and reassemble", ok);
}

#[test]
fn criterion_6_reidemeister_moves() {
    let pairs = [
        ("unknot_r2.tang", "unknot.tang"),
        ("trefoil_r2.tang", "trefoil.tang"),
        ("r3_closed_a.tang", "r3_closed_b.tang"),
        ("r2_open_a.tang", "r2_open_b.tang"),
        ("r3_open_a.tang", "r3_open_b.tang"),
    ];
    let mut ok = true;
    for (a, b) in pairs {
        let (da, db) = (load(a), load(b));
        let (ca, cb) = (build_complex(&da), build_complex(&db));
        let ha = homology(&ca, &ca.boundary_tangle()).unwrap();
        let hb = homology(&cb, &cb.boundary_tangle()).unwrap();
        if !compare_homology(&ha, &hb) {
            eprintln!("{a} vs {b}: homologies differ");
            ok = false;
        }
    }
    for file in ["strand.tang", "r2_open_a.tang", "twist1.tang"] {
        let d = load(file);
        for sign in [KinkSign::Positive, KinkSign::Negative] {
            match kink_factor_check(&d, 0, sign) {
                Ok(true) => {}
                other => {
                    eprintln!("{file}: kink {sign:?}: {other:?}");
                    ok = false;
                }
            }
        }
    }
    report(6, "Reidemeister 2 and 3 invariance plus kink factors", ok);
}

#[test]
fn criterion_7_boundary_rules_agree_on_small_closed_diagrams() {
    let mut ok = true;
    for (name, d) in corpus() {
        if !d.is_closed() || d.crossing_count() > 3 {
            continue;
        }
        let cx = build_complex(&d);
        let tangle = cx.boundary_tangle();
        let link = cx.boundary_link(&FrobeniusTable::standard()).unwrap();
        if tangle != link {
            eprintln!("{name}: boundary matrices differ between rules");
            ok = false;
        }
    }
    report(7, "tangle and link boundary rules coincide when closed", ok);
}

#[test]
fn criterion_8_flipped_sign_negative_control() {
    let d = load("trefoil.tang");
    let cx = build_complex(&d);
    let good = cx.boundary_link(&FrobeniusTable::standard()).unwrap();
    let bad = cx
        .boundary_link(&FrobeniusTable::with_flipped(FrobeniusRule::SplitOneToOneX))
        .unwrap();
    let ok = verify_dsquare(&good).is_ok()
        && matches!(verify_dsquare(&bad), Err(Error::NotAComplex { .. }));
    report(8, "one flipped coefficient breaks d squared", ok);
}
