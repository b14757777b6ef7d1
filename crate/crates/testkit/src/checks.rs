//! Each check runs `cases` seeded trials and reports the first failure.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use ttm_core::cohomology::{build_complex, cohomology_of_x};
use ttm_core::invariants::{euler_characteristic, fundamental_group};
use ttm_core::lattice::{complete_to_basis, det, is_primitive_tuple, smith_normal_form};
use ttm_core::signature::{blow_up, meyer_form, meyer_tau, NecklaceModel};
use ttm_core::ttm::CheckId;
use ttm_core::{AbelianGroup, Error, IntMat, IntVec};

use crate::gen;

pub type CheckResult = Result<usize, String>;

/// `L·A·R = D`, unimodular factors, nonnegative divisibility chain.
pub fn smith_normal_form_laws(cases: usize, seed: u64) -> CheckResult {
    let mut rng = gen::rng(seed);
    for case in 0..cases {
        let (r, c) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let a = if rng.gen_bool(0.3) {
            let inner = rng.gen_range(1..=2);
            &gen::int_mat(&mut rng, r, inner, 6) * &gen::int_mat(&mut rng, inner, c, 6)
        } else {
            gen::int_mat(&mut rng, r, c, 12)
        };
        let snf = smith_normal_form(&a);
        let fail = |what: &str| Err(format!("case {case}: {what} for {a}"));
        if &(&snf.left * &a) * &snf.right != snf.diagonal_matrix() {
            return fail("L·A·R differs from the diagonal");
        }
        for m in [&snf.left, &snf.right] {
            if det(m).map_err(|e| e.to_string())?.abs() != BigInt::one() {
                return fail("factor is not unimodular");
            }
        }
        let d = &snf.diag;
        if d.iter().any(|x| x.is_negative()) {
            return fail("negative invariant factor");
        }
        for w in d.windows(2) {
            let ok = if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) };
            if !ok {
                return fail("divisibility chain broken");
            }
        }
    }
    Ok(cases)
}

fn minor_gcd(m: &[Vec<i64>], k: usize) -> i128 {
    fn laplace(m: &[Vec<i128>]) -> i128 {
        if m.is_empty() {
            return 1;
        }
        (0..m.len())
            .map(|j| {
                let sub: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * laplace(&sub)
            })
            .sum()
    }
    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        (k - 1..n)
            .flat_map(|last| {
                subsets(last, k - 1).into_iter().map(move |mut s| {
                    s.push(last);
                    s
                })
            })
            .collect()
    }
    // m is n rows by k columns
    subsets(m.len(), k).into_iter().fold(0i128, |g, rows| {
        let sub: Vec<Vec<i128>> = rows.iter().map(|&r| m[r].iter().map(|&x| x as i128).collect()).collect();
        g.gcd(&laplace(&sub))
    })
}

/// Primitivity agrees with "maximal minors have gcd 1", and primitive tuples
/// extend to unimodular bases.
pub fn primitivity_oracle(cases: usize, seed: u64) -> CheckResult {
    let mut rng = gen::rng(seed);
    for case in 0..cases {
        let n = rng.gen_range(1..=4);
        let k = rng.gen_range(1..=n);
        let a = if rng.gen_bool(0.4) {
            // leading columns of a random unimodular matrix
            let mut u = IntMat::identity(n);
            for _ in 0..8 {
                let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
                if i != j {
                    let f: BigInt = rng.gen_range(-2i64..=2).into();
                    for c in 0..n {
                        let v = &u[(j, c)] * &f;
                        u[(i, c)] += v;
                    }
                }
            }
            let mut a = IntMat::zeros(n, k);
            for i in 0..n {
                for j in 0..k {
                    a[(i, j)] = u[(i, j)].clone();
                }
            }
            a
        } else {
            gen::int_mat(&mut rng, n, k, 4)
        };
        let vectors: Vec<IntVec> = a.columns();
        let rows = a.to_i64_rows().ok_or("entries overflow i64")?;
        let oracle = minor_gcd(&rows, k) == 1;
        let got = is_primitive_tuple(&vectors).map_err(|e| e.to_string())?;
        if got != oracle {
            return Err(format!("case {case}: is_primitive_tuple = {got}, minors say {oracle} for {a}"));
        }
        let completed = complete_to_basis(&vectors, n).map_err(|e| e.to_string())?;
        match (oracle, completed) {
            (true, Some(b)) => {
                let lead_ok = (0..k).all(|j| b.column(j) == vectors[j]);
                if !lead_ok || det(&b).map_err(|e| e.to_string())?.abs() != BigInt::one() {
                    return Err(format!("case {case}: completion {b} of {a} is not a unimodular extension"));
                }
            }
            (false, None) => {}
            (p, c) => return Err(format!("case {case}: primitive = {p} but completion = {c:?}")),
        }
    }
    Ok(cases)
}

/// `τ(A,B) + τ(AB,C) = τ(A,BC) + τ(B,C)`, symmetric forms, `|τ| ≤ dim V ≤ 4`,
/// and vanishing against the identity.
pub fn meyer_cocycle(cases: usize, seed: u64) -> CheckResult {
    let mut rng = gen::rng(seed);
    let tau = |x: &IntMat, y: &IntMat| meyer_tau(x, y).map_err(|e| e.to_string());
    let id = IntMat::identity(2);
    for case in 0..cases {
        let (a, b, c) = (gen::sl2_word(&mut rng, 6), gen::sl2_word(&mut rng, 6), gen::sl2_word(&mut rng, 6));
        let lhs = tau(&a, &b)? + tau(&(&a * &b), &c)?;
        let rhs = tau(&a, &(&b * &c))? + tau(&b, &c)?;
        if lhs != rhs {
            return Err(format!("case {case}: cocycle identity fails for {a}, {b}, {c}: {lhs} vs {rhs}"));
        }
        let form = meyer_form(&a, &b).map_err(|e| format!("case {case}: {e}"))?;
        let t = tau(&a, &b)?;
        if t.unsigned_abs() as usize > form.dim() || form.dim() > 4 {
            return Err(format!("case {case}: |tau| = {} exceeds dim V = {}", t.abs(), form.dim()));
        }
        if tau(&a, &id)? != 0 || tau(&id, &a)? != 0 {
            return Err(format!("case {case}: tau against the identity is nonzero for {a}"));
        }
    }
    Ok(cases)
}

/// `δ¹∘δ⁰ = 0` on valid data, and a closure failure exactly when the
/// boundary holonomy moves the single characteristic vector of a cornerless
/// base off `±u`.
pub fn cochain_complex(cases: usize, seed: u64) -> CheckResult {
    let mut rng = gen::rng(seed);
    for case in 0..cases {
        let spec = gen::valid_spec(&mut rng);
        for q in 0..3 {
            let c = build_complex(&spec, q).map_err(|e| format!("case {case}, q = {q}: {e}"))?;
            if !(&c.d1 * &c.d0).is_zero() {
                return Err(format!("case {case}, q = {q}: d1·d0 is nonzero"));
            }
        }
        let spec = gen::cornerless_spec(&mut rng);
        let lattice_fails = spec.validate().has_failure(CheckId::Lattice);
        match (lattice_fails, build_complex(&spec, 1)) {
            (true, Err(Error::Closure { .. })) => {}
            (false, Ok(c)) if (&c.d1 * &c.d0).is_zero() => {}
            (f, r) => {
                return Err(format!(
                    "case {case}: lattice check failing = {f} but complex construction gave {:?}",
                    r.map(|_| "a complex")
                ))
            }
        }
    }
    Ok(cases)
}

/// Blow-ups keep corner determinants at 1 and add a sphere of square −1.
pub fn blow_up_validity(cases: usize, seed: u64) -> CheckResult {
    let mut rng = gen::rng(seed);
    for case in 0..cases {
        let spec = gen::cornered_spec(&mut rng);
        let necklace = NecklaceModel::from_spec(&spec).map_err(|e| e.to_string())?;
        if !necklace.is_valid() {
            return Err(format!("case {case}: generated necklace {necklace} is invalid"));
        }
        let corner = rng.gen_range(0..necklace.len());
        let blown = blow_up(&necklace, corner).map_err(|e| format!("case {case}: {e}"))?;
        if !blown.is_valid() {
            return Err(format!("case {case}: blow-up of {necklace} at {corner} gave {blown}"));
        }
        let inserted = blown.exceptional.iter().enumerate().filter(|(_, &e)| e).map(|(i, _)| i);
        for i in inserted {
            let s = blown.self_intersection(i).map_err(|e| e.to_string())?;
            if s != BigInt::from(-1) {
                return Err(format!("case {case}: exceptional sphere {i} of {blown} has square {s}"));
            }
        }
    }
    Ok(cases)
}

/// `H⁰ = H⁴ = ℤ`, `b₁ = b₃`, `χ` from corners equals the alternating Betti
/// sum, and `π₁` abelianizes to rank `b₁` when there is a corner.
pub fn cohomology_shape(cases: usize, seed: u64) -> CheckResult {
    let mut rng = gen::rng(seed);
    for case in 0..cases {
        let spec = gen::valid_spec(&mut rng);
        let r = cohomology_of_x(&spec).map_err(|e| format!("case {case}: {e}"))?;
        let h = &r.groups;
        let z = AbelianGroup::free(1);
        if h[0] != z || h[4] != z || h[1].free_rank != h[3].free_rank {
            let shown: Vec<String> = h.iter().map(|g| g.to_string()).collect();
            return Err(format!("case {case}: H* = {shown:?} for {:?}", spec.base));
        }
        let chi: i64 = h.iter().enumerate().map(|(k, g)| if k % 2 == 0 { 1 } else { -1 } * g.free_rank as i64).sum();
        if euler_characteristic(&spec).map_err(|e| e.to_string())? != chi {
            return Err(format!("case {case}: corner count differs from Betti sum {chi}"));
        }
        if spec.base.corner_count() >= 1 {
            let pi = fundamental_group(&spec).map_err(|e| e.to_string())?;
            if pi.abelianization().free_rank != h[1].free_rank {
                return Err(format!("case {case}: pi_1 abelianization rank differs from b1"));
            }
        }
    }
    Ok(cases)
}

/// Every suite, labelled, for reporting.
pub fn all() -> Vec<(&'static str, fn(usize, u64) -> CheckResult)> {
    vec![
        ("smith normal form", smith_normal_form_laws),
        ("primitivity vs minors", primitivity_oracle),
        ("meyer cocycle and symmetry", meyer_cocycle),
        ("coboundary and subgroup closure", cochain_complex),
        ("blow-up validity", blow_up_validity),
        ("cohomology shape", cohomology_shape),
    ]
}
