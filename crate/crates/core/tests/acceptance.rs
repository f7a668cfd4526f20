//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use privcache::construct::dual::dualize;
use privcache::construct::mn::{build_mn, build_trivial, TrivialMode};
use privcache::construct::pda::{build_from_pda, Pda};
use privcache::construct::private::{build_partial_private, privatize, subpack_comparison};
use privcache::construct::symbolic_matrix;
use privcache::construct::table1::build_table1;
use privcache::construct::timeshare::time_share;
use privcache::construct::tradeoff::tradeoff_schemes;
use privcache::search::{search_sub2, search_sub3_uncoded, SearchOptions};
use privcache::verify::{matching_cells, privacy_report, rate_and_memory, verify_correctness, weak_privacy_check};
use privcache::{BitMatrix, DemandVector, Echelon, KeyVector, Rational, Scheme};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn r(p: i64, q: i64) -> Rational {
    Rational::new(p, q)
}

fn ensure(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn shape(s: &Scheme) -> String {
    let (m, rate) = rate_and_memory(s);
    format!("(M, R, f) = ({m}, {rate}, {})", s.params().subpack)
}

fn correct(s: &Scheme) -> Result<(), String> {
    let v = verify_correctness(s);
    ensure(v.is_empty(), format!("{}: {} decoding failures", s.provenance(), v.len()))
}

fn exact_private(s: &Scheme) -> Result<(), String> {
    let rep = privacy_report(s).map_err(|e| e.to_string())?;
    ensure(rep.exact_private, format!("{}: not exactly private (max posterior {})", s.provenance(), rep.max_posterior))
}

fn c1() -> Outcome {
    let s = build_table1();
    ensure(s.layout().cell_count() == 16, "expected 16 cells")?;
    correct(&s)?;
    let rep = privacy_report(&s).map_err(|e| e.to_string())?;
    ensure(rep.max_mutual_info_bits == 0.0, format!("I = {}", rep.max_mutual_info_bits))?;
    ensure(rep.min_ambiguity == 2, format!("min ambiguity {}", rep.min_ambiguity))?;
    ensure(rate_and_memory(&s) == (r(1, 1), r(2, 3)) && s.params().subpack == 3, shape(&s))?;
    Ok(format!("16 cells decode, I = 0, ambiguity 2, {}", shape(&s)))
}

fn c2() -> Outcome {
    let s = build_mn(2, 2, 1).map_err(|e| e.to_string())?;
    correct(&s)?;
    let rep = privacy_report(&s).map_err(|e| e.to_string())?;
    ensure(rep.min_ambiguity == 1, format!("min ambiguity {}", rep.min_ambiguity))?;
    Ok(format!("correct, min ambiguity 1, I = {} bit", rep.max_mutual_info_bits))
}

fn c3() -> Outcome {
    let s = privatize(&build_mn(4, 2, 2).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    correct(&s)?;
    exact_private(&s)?;
    let p = s.params();
    ensure((p.users, p.files, p.subpack) == (2, 2, 6), format!("K={} N={} f={}", p.users, p.files, p.subpack))?;
    ensure(rate_and_memory(&s) == (r(1, 1), r(2, 3)), shape(&s))?;
    let direct = build_table1();
    ensure(rate_and_memory(&direct) == rate_and_memory(&s) && direct.params().subpack == 3, "direct scheme mismatch")?;
    Ok(format!("private scheme {}, direct scheme f = 3", shape(&s)))
}

fn c4() -> Outcome {
    let pda = Pda::six_user_example();
    let dims = (pda.users(), pda.subpack(), pda.stars(), pda.symbols());
    ensure(dims == (6, 4, 2, 4), format!("PDA dimensions {dims:?}"))?;
    let bad = pda.validate();
    ensure(bad.is_empty(), format!("PDA violations {bad:?}"))?;
    let s = privatize(&build_from_pda(&pda, 2).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    correct(&s)?;
    exact_private(&s)?;
    ensure((s.params().users, s.params().files) == (3, 2), "expected K = 3, N = 2")?;
    ensure(rate_and_memory(&s) == (r(1, 1), r(1, 1)), shape(&s))?;
    let target = symbolic_matrix(2, 4, &["B1+A2+A0", "A0+A3+B1", "B3+B0+B2", "A2+B1+A3"]).map_err(|e| e.to_string())?;
    let found = matching_cells(&s, &target);
    let want = (DemandVector(vec![0, 0, 1]), KeyVector(vec![1, 0, 0]), 0);
    ensure(found.contains(&want), format!("realizations found: {found:?}"))?;
    Ok(format!("(6,4,2,4) PDA valid, (3,2;1,1) private, transmission realized by D = AAB, keys {}", want.1))
}

fn c5() -> Outcome {
    let t1 = build_table1();
    let d = dualize(&t1).map_err(|e| e.to_string())?;
    let m = |rows: &[&str]| symbolic_matrix(2, 3, rows).map_err(|e| e.to_string());
    let listed = [
        vec![m(&["A1", "B1"])?, m(&["A2", "B2"])?],
        vec![m(&["A0+A1+A2", "B0+B1+B2"])?, m(&["A0", "B0"])?],
    ];
    for (u, want) in listed.iter().enumerate() {
        let got = d.options(u);
        let matched = got.len() == want.len()
            && want.iter().all(|w| got.iter().any(|g| g.same_row_space(w)))
            && got.iter().all(|g| want.iter().any(|w| w.same_row_space(g)));
        ensure(matched, format!("user {u} options differ"))?;
    }
    ensure(rate_and_memory(&d) == (r(2, 3), r(1, 1)), shape(&d))?;
    correct(&d)?;
    exact_private(&d)?;
    let dd = dualize(&d).map_err(|e| e.to_string())?;
    ensure(rate_and_memory(&dd) == (r(1, 1), r(2, 3)), format!("double dual {}", shape(&dd)))?;
    Ok("dual options match, (2/3, 1) private, double dual (1, 2/3)".into())
}

fn c6() -> Outcome {
    let curve = tradeoff_schemes().map_err(|e| e.to_string())?;
    let points: Vec<(Rational, Rational)> = curve.iter().map(|(p, _)| (p.memory, p.rate)).collect();
    let want = vec![(r(0, 1), r(2, 1)), (r(2, 3), r(1, 1)), (r(1, 1), r(2, 3)), (r(2, 1), r(0, 1))];
    ensure(points == want, format!("curve {points:?}"))?;
    for (_, s) in &curve {
        correct(s)?;
        exact_private(s)?;
    }
    let dual = &curve[1].1;
    let t1 = &curve[2].1;
    let mid = time_share(dual, t1, r(1, 2)).map_err(|e| e.to_string())?;
    ensure(rate_and_memory(&mid) == (r(5, 6), r(5, 6)), format!("time sharing {}", shape(&mid)))?;
    correct(&mid)?;
    exact_private(&mid)?;
    Ok("vertices (0,2) (2/3,1) (1,2/3) (2,0) verified; midpoint (5/6, 5/6) private".into())
}

fn c7() -> Outcome {
    let rep = search_sub2(&SearchOptions::new());
    ensure(rep.candidates_examined <= 81 * 16 * 16, format!("{} candidates", rep.candidates_examined))?;
    ensure(rep.feasible_found == 0, format!("{} feasible", rep.feasible_found))?;
    let control = search_sub2(&SearchOptions { privacy_condition: false, ..SearchOptions::new() });
    ensure(control.feasible_found >= 1, "control run found nothing")?;
    Ok(format!(
        "{} candidates, 0 feasible; control run {} feasible",
        rep.candidates_examined, control.feasible_found
    ))
}

fn c8() -> Outcome {
    let rep = search_sub3_uncoded(&SearchOptions::new());
    ensure(rep.counts.get("option-sets-per-user") == Some(&190), "expected 190 option sets per user")?;
    ensure(rep.feasible_found == 0, format!("{} feasible", rep.feasible_found))?;
    ensure(rep.sub_lemma_checks.get("A2-forced") == Some(&true), "A2-forced check failed")?;
    Ok(format!("190^2 option-set pairs, {} candidates, 0 feasible, A2-forced holds", rep.candidates_examined))
}

fn c9() -> Outcome {
    let s = build_partial_private(&build_mn(4, 4, 2).map_err(|e| e.to_string())?, 2).map_err(|e| e.to_string())?;
    correct(&s)?;
    ensure(rate_and_memory(&s) == (r(2, 1), r(2, 3)) && s.params().subpack == 6, shape(&s))?;
    let rep = privacy_report(&s).map_err(|e| e.to_string())?;
    ensure(rep.min_ambiguity >= 2, format!("min ambiguity {}", rep.min_ambiguity))?;
    let cmp = subpack_comparison(10, 2, r(5, 1), 2).map_err(|e| e.to_string())?;
    ensure(cmp == (184756, 6), format!("comparison {cmp:?}"))?;
    Ok(format!("{}, min ambiguity {}, subpacketization 184756 vs 6", shape(&s), rep.min_ambiguity))
}

fn span(rows: &[u64]) -> Vec<u64> {
    let mut out: Vec<u64> = (0u32..1 << rows.len())
        .map(|mask| rows.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).fold(0, |a, (_, r)| a ^ r))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn c10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let trials = 20_000;
    for _ in 0..trials {
        let cols = rng.gen_range(1..=8);
        let rows: Vec<u64> = (0..rng.gen_range(0..=6)).map(|_| rng.gen_range(0..1u64 << cols)).collect();
        let m = BitMatrix::from_rows(cols, rows).map_err(|e| e.to_string())?;
        let sp = span(m.rows());
        ensure(1usize << m.rank() == sp.len(), format!("rank mismatch on {m:?}"))?;
        ensure(span(m.rref().rows()) == sp, format!("rref changes span of {m:?}"))?;
        ensure(m.rref().rref() == m.rref(), format!("rref not idempotent on {m:?}"))?;
        let v = rng.gen_range(0..1u64 << cols);
        let ech = Echelon::new(cols, m.rows());
        ensure(ech.contains(v) == sp.binary_search(&v).is_ok(), format!("membership mismatch on {m:?}"))?;
    }

    let t1 = build_table1();
    let dual = dualize(&t1).map_err(|e| e.to_string())?;
    let empty = build_trivial(2, 2, TrivialMode::EmptyCache).map_err(|e| e.to_string())?;
    let corpus = vec![
        build_mn(2, 2, 1).map_err(|e| e.to_string())?,
        build_mn(4, 2, 2).map_err(|e| e.to_string())?,
        privatize(&build_mn(4, 2, 2).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?,
        privatize(&build_from_pda(&Pda::six_user_example(), 2).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?,
        build_partial_private(&build_mn(4, 4, 2).map_err(|e| e.to_string())?, 2).map_err(|e| e.to_string())?,
        build_trivial(2, 2, TrivialMode::FullCache).map_err(|e| e.to_string())?,
        time_share(&t1, &empty, r(1, 3)).map_err(|e| e.to_string())?,
        dual.clone(),
        empty.clone(),
        t1.clone(),
    ];
    let mut private = 0;
    for s in &corpus {
        if privacy_report(s).map_err(|e| e.to_string())?.exact_private {
            private += 1;
            ensure(weak_privacy_check(s).is_empty(), format!("{} private but fails the weak check", s.provenance()))?;
        }
    }

    let pairs = [(&t1, &dual), (&dual, &empty), (&t1, &t1)];
    for (a, b) in pairs {
        for alpha in [r(1, 4), r(1, 2), r(2, 3)] {
            let s = time_share(a, b, alpha).map_err(|e| e.to_string())?;
            correct(&s)?;
            exact_private(&s)?;
        }
    }
    Ok(format!(
        "{trials} random linear-algebra oracle checks; {private}/{} corpus schemes private, all weakly private; 9 time-shared schemes private",
        corpus.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("three-subfile private scheme", Duration::from_secs(1), c1),
        ("non-private baseline", Duration::from_secs(1), c2),
        ("privatized MN(4,2,2)", Duration::from_secs(5), c3),
        ("PDA pipeline", Duration::from_secs(30), c4),
        ("duality", Duration::from_secs(1), c5),
        ("trade-off curve", Duration::from_secs(5), c6),
        ("impossibility, two subfiles", Duration::from_secs(10), c7),
        ("impossibility, uncoded three subfiles", Duration::from_secs(15 * 60), c8),
        ("partial privacy", Duration::from_secs(60), c9),
        ("property suites", Duration::from_secs(120), c10),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= *limit => (true, d),
            Ok(d) => (false, format!("{d}; took {elapsed:.2?}, limit {limit:?}")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2}: {} {name} [{elapsed:.3?} / {limit:?}] {detail}",
            i + 1,
            if ok { "PASS" } else { "FAIL" }
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
