//! End-to-end acceptance checks. Each prints one PASS/FAIL line; the test
//! fails if any check fails or takes a second or more.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use ttm_cli::document::SpecDocument;
use ttm_cli::report::{GroupRecord, ReportDocument};
use ttm_cli::{run_command, EXIT_OK, EXIT_UNSUPPORTED};
use ttm_core::cohomology::cohomology_of_x;
use ttm_core::invariants::euler_characteristic;
use ttm_core::signature::{signature_of_form, signature_total, RatSymForm};
use ttm_core::IntMat;
use ttm_testkit::{checks, SEED};

const PROPERTY_CASES: usize = 100;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn spec_fixtures() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(fixture(""))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "ttm"))
        .collect();
    v.sort();
    v
}

fn run_json(args: &[&str]) -> (i32, ReportDocument) {
    let mut argv = vec!["ttm", "--json"];
    argv.extend_from_slice(args);
    let out = run_command(argv);
    let parsed: ReportDocument = serde_json::from_str(&out.output).expect("report is JSON");
    (out.code, parsed)
}

fn g(rank: usize, torsion: &[i64]) -> GroupRecord {
    GroupRecord {
        rank,
        torsion: torsion.to_vec(),
    }
}

fn z(rank: usize) -> GroupRecord {
    g(rank, &[])
}

/// `H*` and the `e2[p][q]` grid from the CLI.
fn cohomology(file: &Path) -> Result<(Vec<GroupRecord>, Vec<Vec<GroupRecord>>), String> {
    let (code, r) = run_json(&["cohomology", "--e2", file.to_str().unwrap()]);
    if code != EXIT_OK {
        return Err(format!("exit {code}: {:?}", r.error));
    }
    let c = r.cohomology.ok_or("no cohomology section")?;
    Ok((c.h, c.e2.ok_or("no E2 grid")?))
}

/// Grid with the given nonzero entries `((p, q), group)`.
fn grid(entries: &[((usize, usize), GroupRecord)]) -> Vec<Vec<GroupRecord>> {
    let mut out = vec![vec![z(0); 3]; 3];
    for ((p, q), grp) in entries {
        out[*p][*q] = grp.clone();
    }
    out
}

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, expected {want:?}"))
    }
}

/// The common grid of a torus with `k` corners and shear monodromy.
fn cornered_torus_grid(k: usize) -> Vec<Vec<GroupRecord>> {
    grid(&[((0, 0), z(1)), ((1, 0), z(2)), ((1, 1), z(k + 2)), ((1, 2), z(2)), ((2, 2), z(1))])
}

fn cylinder_cohomology() -> Result<(), String> {
    let (h, e2) = cohomology(&fixture("cylinder.ttm"))?;
    expect("H*", h, vec![z(1), z(1), g(0, &[2]), g(1, &[2]), z(1)])?;
    let want = grid(&[
        ((0, 0), z(1)),
        ((1, 0), z(1)),
        ((1, 1), g(0, &[2])),
        ((2, 1), g(0, &[2])),
        ((1, 2), z(1)),
        ((2, 2), z(1)),
    ]);
    expect("E2", e2, want)
}

fn cornerless_cohomology() -> Result<(), String> {
    for (file, genus) in [("cornerless_genus1.ttm", 1), ("cornerless_genus2.ttm", 2)] {
        let (h, _) = cohomology(&fixture(file))?;
        expect(file, h, vec![z(1), z(2 * genus + 1), z(4 * genus), z(2 * genus + 1), z(1)])?;
    }
    let (h, _) = cohomology(&fixture("cornerless_shear.ttm"))?;
    expect("shear H^2", &h[2], &g(2, &[2]))?;
    expect("shear H^3", &h[3], &g(2, &[2]))
}

fn cornered_torus_cohomology() -> Result<(), String> {
    for (file, k) in [("two_corner_torus.ttm", 2), ("three_corner_torus.ttm", 3), ("four_corner_torus.ttm", 4)] {
        let (h, e2) = cohomology(&fixture(file))?;
        expect(file, h, vec![z(1), z(2), z(k + 2), z(2), z(1)])?;
        expect(file, e2, cornered_torus_grid(k))?;
    }
    Ok(())
}

fn one_corner_cohomology() -> Result<(), String> {
    let (h, e2) = cohomology(&fixture("one_corner_torus.ttm"))?;
    expect("H*", h, vec![z(1), z(2), z(3), z(2), z(1)])?;
    expect("E2", e2, cornered_torus_grid(1))
}

fn euler_characteristic_matches() -> Result<(), String> {
    let mut corner_counts = Vec::new();
    for path in spec_fixtures() {
        let text = std::fs::read_to_string(&path).unwrap();
        let spec = SpecDocument::parse(&text).map_err(|e| e.to_string())?.to_spec().map_err(|e| e.to_string())?;
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        let chi = euler_characteristic(&spec).map_err(|e| format!("{name}: {e}"))?;
        expect(&name, chi, spec.base.corner_count() as i64)?;
        let h = cohomology_of_x(&spec).map_err(|e| format!("{name}: {e}"))?.groups;
        let alternating: i64 = h.iter().enumerate().map(|(k, g)| if k % 2 == 0 { 1 } else { -1 } * g.free_rank as i64).sum();
        expect(&name, alternating, chi)?;
        corner_counts.push(spec.base.corner_count());
    }
    for k in 0..=4 {
        if !corner_counts.contains(&k) {
            return Err(format!("no fixture with {k} corners"));
        }
    }
    Ok(())
}

fn one_corner_signature() -> Result<(), String> {
    let text = std::fs::read_to_string(fixture("one_corner_torus.ttm")).unwrap();
    let spec = SpecDocument::parse(&text).unwrap().to_spec().unwrap();
    let b = signature_total(&spec).map_err(|e| e.to_string())?;
    let taus: Vec<i64> = b.interior_terms.iter().map(|(_, t)| *t).collect();
    expect("tau terms", taus, vec![0])?;
    expect("blown-up matrix", b.boundary_matrix.clone(), IntMat::mat2(-1, 2, 2, -5))?;
    let blown = signature_of_form(&RatSymForm::from_int_mat(&b.boundary_matrix).unwrap());
    expect("signature of the blow-up", blown, -2)?;
    expect("boundary signature", b.sigma_boundary, -1)?;
    expect("total", b.total, -1)?;
    let (code, r) = run_json(&["signature", fixture("one_corner_torus.ttm").to_str().unwrap()]);
    expect("cli exit", code, EXIT_OK)?;
    expect("cli total", r.signature.map(|s| s.total), Some(-1))
}

fn delzant_sanity() -> Result<(), String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for (name, sigma, ranks) in [("triangle", 1, [1, 0, 1, 0, 1]), ("square", 0, [1, 0, 2, 0, 1])] {
        let out = dir.path().join(format!("{name}.ttm"));
        let poly = fixture(&format!("{name}.poly.json"));
        let (code, r) = run_json(&["delzant", "convert", poly.to_str().unwrap(), "-o", out.to_str().unwrap()]);
        expect(&format!("{name} convert exit"), code, EXIT_OK)?;
        expect(&format!("{name} convert"), r.validation.map(|v| v.valid), Some(true))?;
        let (code, r) = run_json(&["signature", out.to_str().unwrap()]);
        expect(&format!("{name} signature exit"), code, EXIT_OK)?;
        expect(&format!("{name} signature"), r.signature.map(|s| s.total), Some(sigma))?;
        let (h, _) = cohomology(&out)?;
        expect(&format!("{name} ranks"), h.iter().map(|g| g.rank).collect::<Vec<_>>(), ranks.to_vec())?;
        if h.iter().any(|g| !g.torsion.is_empty()) {
            return Err(format!("{name}: unexpected torsion"));
        }
    }
    Ok(())
}

fn property_suites() -> Result<(), String> {
    for (name, check) in checks::all() {
        let n = check(PROPERTY_CASES, SEED).map_err(|e| format!("{name}: {e}"))?;
        if n < 100 {
            return Err(format!("{name}: only {n} cases"));
        }
    }
    Ok(())
}

fn fundamental_groups() -> Result<(), String> {
    let (code, r) = run_json(&["invariants", fixture("one_corner_torus.ttm").to_str().unwrap()]);
    expect("torus exit", code, EXIT_OK)?;
    let p = r.fundamental_group.ok_or("no presentation")?;
    expect("torus", (p.classification.as_str(), p.generators.len()), ("free of rank 2", 2))?;
    let (code, r) = run_json(&["invariants", fixture("triangle.ttm").to_str().unwrap()]);
    expect("triangle exit", code, EXIT_OK)?;
    expect("triangle", r.fundamental_group.map(|p| p.classification), Some("trivial".to_string()))?;
    for file in ["cornerless_genus1.ttm", "cylinder.ttm"] {
        let (code, r) = run_json(&["invariants", fixture(file).to_str().unwrap()]);
        expect(file, code, EXIT_UNSUPPORTED)?;
        let message = r.error.map(|e| e.message).unwrap_or_default();
        if !message.contains("corner point") {
            return Err(format!("{file}: message does not cite the hypothesis: {message}"));
        }
    }
    let (code, _) = run_json(&["signature", fixture("cornerless_genus1.ttm").to_str().unwrap()]);
    expect("cornerless signature exit", code, EXIT_UNSUPPORTED)
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Result<(), String>); 9] = [
        ("cylinder cohomology and E2 grid", cylinder_cohomology),
        ("cornerless bases with and without shear torsion", cornerless_cohomology),
        ("tori with two, three and four corners", cornered_torus_cohomology),
        ("one-corner torus cohomology and E2 grid", one_corner_cohomology),
        ("euler characteristic equals corners and betti sum", euler_characteristic_matches),
        ("one-corner torus signature pipeline", one_corner_signature),
        ("delzant triangle and square", delzant_sanity),
        ("seeded property suites", property_suites),
        ("fundamental group and unsupported exits", fundamental_groups),
    ];
    let mut failures = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let verdict = match (&result, elapsed < Duration::from_secs(1)) {
            (Ok(()), true) => "PASS".to_string(),
            (Ok(()), false) => "FAIL (too slow)".to_string(),
            (Err(e), _) => format!("FAIL ({e})"),
        };
        if !verdict.starts_with("PASS") {
            failures += 1;
        }
        println!("{verdict:<6} {name} [{} ms]", elapsed.as_millis());
    }
    assert_eq!(failures, 0, "{failures} acceptance check(s) failed");
}
