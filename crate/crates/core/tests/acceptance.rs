//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines are always printed; exits non-zero if any
//! criterion fails.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use muchnik_core::brouwer::BrouwerAlgebra;
use muchnik_core::corpus;
use muchnik_core::logic::{forces, frame_countermodel, AlgebraValuation, FrameValuation};
use muchnik_core::splitting::{check_split_conditions, Antichain, WithSplit, DEFAULT_ROUND_CAP};
use muchnik_core::{
    build_until_complete, eval_algebra, interval_algebra, ipc_check_bounded, iso_check, parse,
    pmorphism_of, quotient, search_pmorphism, split_from_cond_ii, theory_contains, transfer_check,
    upset_algebra, verify_brouwer, verify_pmorphism, verify_splitting_class, Formula, IpcVerdict,
    Poset, SplittingStructure, Structure, SyntheticAntichainModel, Upset,
};
use rand::seq::IndexedRandom;
use rand::Rng;

use common::*;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Posets of criterion 1: all labelled posets up to four elements plus 200
/// random five-element ones.
fn criterion_posets() -> Vec<Poset> {
    let mut v = posets_up_to(4);
    v.extend(random_posets(5, 200, 1));
    v
}

fn criterion_algebras() -> Vec<(Poset, BrouwerAlgebra)> {
    criterion_posets()
        .into_iter()
        .map(|p| {
            let b = upset_algebra(&p).unwrap().algebra;
            (p, b)
        })
        .collect()
}

fn brouwer_validity() -> Check {
    let posets = criterion_posets();
    for p in &posets {
        let ua = upset_algebra(p).map_err(|e| e.to_string())?;
        let b = &ua.algebra;
        let report = verify_brouwer(b);
        ensure(report.is_valid(), || {
            format!("{:?}: {:?}", p.labels(), report.violations.first())
        })?;
        // tables against set operations on brute-force upsets
        let masks = upset_masks(p);
        let mask = |a: usize| ua.upset(a).members().ones().fold(0u32, |m, x| m | 1 << x);
        let mut carrier: Vec<u32> = (0..b.len()).map(mask).collect();
        carrier.sort_unstable();
        ensure(carrier == masks, || {
            format!("{:?}: carrier differs", p.labels())
        })?;
        let full = (1u32 << p.len()) - 1;
        ensure(mask(b.bottom()) == full && mask(b.top()) == 0, || {
            "bounds".into()
        })?;
        for x in 0..b.len() {
            for y in 0..b.len() {
                let (u, v) = (mask(x), mask(y));
                ensure(
                    mask(b.join(x, y)) == u & v
                        && mask(b.meet(x, y)) == u | v
                        && mask(b.imp(x, y)) == imp_mask(p, u, v),
                    || format!("{:?}: tables differ at ({x},{y})", p.labels()),
                )?;
            }
        }
    }
    Ok(format!(
        "{} upset algebras valid, tables match set operations",
        posets.len()
    ))
}

fn valuations(vars: &[String], size: usize) -> Vec<AlgebraValuation> {
    common::all_maps(vars.len(), size)
        .map(|vals| vars.iter().cloned().zip(vals).collect())
        .collect()
}

fn soundness() -> Check {
    let theorems = corpus::ipc_theorems();
    let algebras = criterion_algebras();
    let mut r = rng(2);
    let (mut exhaustive, mut sampled) = (0usize, 0usize);
    for (_, b) in &algebras {
        for f in &theorems {
            let vars: Vec<String> = f.vars().into_iter().collect();
            let vals = if vars.len() <= 2 {
                exhaustive += 1;
                valuations(&vars, b.len())
            } else {
                sampled += 1;
                (0..200)
                    .map(|_| {
                        vars.iter()
                            .map(|v| (v.clone(), r.random_range(0..b.len())))
                            .collect()
                    })
                    .collect()
            };
            for v in &vals {
                let value = eval_algebra(f, b, v).map_err(|e| e.to_string())?;
                ensure(value == b.bottom(), || {
                    format!("{f} is {} under {v:?}", b.label(value))
                })?;
            }
        }
    }
    Ok(format!(
        "{} theorems on {} algebras ({exhaustive} exhaustive, {sampled} sampled checks)",
        theorems.len(),
        algebras.len()
    ))
}

fn weak_lem() -> Check {
    let f = parse("~p | ~~p").unwrap();
    let semilattices: Vec<Poset> = posets_up_to(4)
        .into_iter()
        .filter(Poset::is_join_semilattice)
        .collect();
    for d in &semilattices {
        let b = upset_algebra(d).unwrap().algebra;
        ensure(theory_contains(Structure::Algebra(&b), &f).unwrap(), || {
            format!("fails on {:?}", d.labels())
        })?;
    }
    let fork = Poset::binary_tree(2);
    let mut v = FrameValuation::new();
    v.insert("p".into(), Upset::from_labels(&fork, &["0"]).unwrap());
    ensure(!forces(&fork, 0, &v, &f).unwrap(), || {
        "v(p) = {0} does not refute".into()
    })?;
    ensure(
        !theory_contains(Structure::Frame(&fork), &f).unwrap(),
        || "fork validates it".into(),
    )?;
    let cm = frame_countermodel(&fork, &f).unwrap().unwrap();
    let leaves = cm.valuation["p"].labels(&fork);
    ensure(leaves.len() == 1 && leaves[0] != "ε", || {
        format!("search found {leaves:?}")
    })?;
    Ok(format!(
        "holds on {} join-semilattices, refuted on the fork by a single leaf",
        semilattices.len()
    ))
}

fn muchnik_iso() -> Check {
    let semilattices: Vec<Poset> = posets_up_to(4)
        .into_iter()
        .filter(Poset::is_join_semilattice)
        .collect();
    for d in &semilattices {
        let r = iso_check(d).map_err(|e| e.to_string())?;
        ensure(r.is_valid(), || {
            format!("{:?}: {:?}", d.labels(), r.violations.first())
        })?;
        ensure(r.upsets == upset_masks(d).len(), || "upset count".into())?;
    }
    Ok(format!("{} join-semilattices", semilattices.len()))
}

fn quotient_interval() -> Check {
    let mut checked = 0;
    for (p, b) in criterion_algebras() {
        for x in 0..b.len() {
            let q = quotient(&b, x).map_err(|e| e.to_string())?;
            let report = verify_brouwer(&q.algebra);
            ensure(report.is_valid(), || {
                format!("{:?} / {x}: {:?}", p.labels(), report.violations.first())
            })?;
            let (interval, hom) = interval_algebra(&b, x).map_err(|e| e.to_string())?;
            let v = hom.verify(&interval, &q.algebra);
            ensure(v.is_empty(), || {
                format!("{:?} / {x}: {:?}", p.labels(), v.first())
            })?;
            ensure(
                interval.len() == (0..b.len()).filter(|&u| b.leq(u, x)).count(),
                || "interval size".into(),
            )?;
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} quotients valid and isomorphic to their intervals"
    ))
}

fn mode_agreement() -> Check {
    let formulas = corpus::mixed();
    let posets = posets_up_to(4);
    let (mut valid, mut invalid) = (0, 0);
    for p in &posets {
        let b = upset_algebra(p).unwrap().algebra;
        for f in &formulas {
            let fr = theory_contains(Structure::Frame(p), f).map_err(|e| e.to_string())?;
            let al = theory_contains(Structure::Algebra(&b), f).map_err(|e| e.to_string())?;
            ensure(fr == al, || {
                format!("{f} on {:?}: frame {fr}, algebra {al}", p.labels())
            })?;
            if fr {
                valid += 1;
            } else {
                invalid += 1;
            }
        }
    }
    ensure(valid > 0 && invalid > 0, || "corpus is not mixed".into())?;
    Ok(format!(
        "{} pairs agree ({valid} valid, {invalid} invalid)",
        posets.len() * formulas.len()
    ))
}

fn pmorphism_transfer() -> Check {
    let posets = posets_up_to(4);
    let mut formulas = corpus::mixed();
    formulas.extend(
        corpus::ipc_theorems()
            .into_iter()
            .filter(|f| f.vars().len() <= 2),
    );
    let mut r = rng(7);
    let (mut pairs, mut attempts, mut nontrivial) = (0, 0, 0);
    while pairs < 100 {
        attempts += 1;
        ensure(attempts < 100_000, || format!("only {pairs} pairs found"))?;
        let src = posets.choose(&mut r).unwrap();
        let tgt = posets.choose(&mut r).unwrap();
        let Some(m) = search_pmorphism(src, tgt).map_err(|e| e.to_string())? else {
            continue;
        };
        ensure(is_pmorphism(src, tgt, &m.map), || {
            format!("bad map {:?}", m.map)
        })?;
        let report = transfer_check(src, tgt, &formulas).map_err(|e| e.to_string())?;
        ensure(report.is_empty(), || {
            format!("counterexamples {:?}", report.counterexamples)
        })?;
        if src.len() != tgt.len() {
            nontrivial += 1;
        }
        pairs += 1;
    }
    Ok(format!(
        "{pairs} pairs ({nontrivial} size-reducing), {} formulas each",
        formulas.len()
    ))
}

fn splitting_end_to_end() -> Check {
    let mut runs = 0;
    let mut max_rounds = 0;
    for n in 1..=4 {
        for seed in 0..50u64 {
            let m =
                SyntheticAntichainModel::shuffled(seed, SyntheticAntichainModel::DEFAULT_WINDOW);
            let build = build_until_complete(&m, n, DEFAULT_ROUND_CAP)
                .map_err(|e| format!("n={n} seed={seed}: {e}"))?;
            // The map only grows and both invariants are pairwise, so the
            // final check covers every intermediate stage.
            let v = build.alpha.check_invariants(&m);
            ensure(v.is_empty(), || format!("n={n} seed={seed}: {}", v[0]))?;
            let p = pmorphism_of(&m, &build.alpha).map_err(|e| e.to_string())?;
            ensure(verify_pmorphism(&p).is_empty(), || {
                format!("n={n} seed={seed}: not a p-morphism")
            })?;
            ensure(is_pmorphism(&p.source, &p.target, &p.map), || {
                "oracle disagrees".into()
            })?;
            ensure(p.target.len() == (1 << n) - 1, || "target size".into())?;
            max_rounds = max_rounds.max(build.rounds);
            runs += 1;
        }
    }
    Ok(format!(
        "{runs} runs, at most {max_rounds} rounds (cap {DEFAULT_ROUND_CAP})"
    ))
}

/// Direct string check of a synthetic split: both children extend `f` by one
/// entry, diverge from each other, and diverge from every member of `B`.
fn split_is_sound(f: &Antichain, b: &[Antichain], h0: &Antichain, h1: &Antichain) -> bool {
    let s = &f.strings()[0];
    let diverge = |x: &[u32], y: &[u32]| !x.starts_with(y) && !y.starts_with(x);
    [h0, h1].iter().all(|h| {
        h.len() == 1 && {
            let t = &h.strings()[0];
            t.len() == s.len() + 1
                && t.starts_with(s)
                && b.iter().all(|g| g.strings().iter().all(|u| diverge(t, u)))
        }
    }) && diverge(&h0.strings()[0], &h1.strings()[0])
}

fn splitting_checks() -> Check {
    let m = SyntheticAntichainModel::new();
    let report = verify_splitting_class(&m, 16);
    ensure(report.passed(), || format!("{:?}", report.failures.first()))?;

    let split = split_from_cond_ii(|f: &Antichain, b: &[Antichain]| m.cond_ii(f, b));
    let mut r = rng(9);
    for q in 0..100 {
        let f = m.enumerate(r.random_range(0..32));
        let pool: Vec<Antichain> = (0..32)
            .map(|i| m.enumerate(i))
            .filter(|g| !m.leq(g, &f))
            .collect();
        let k = r.random_range(0..=3.min(pool.len()));
        let b: Vec<Antichain> = pool.choose_multiple(&mut r, k).cloned().collect();
        let (h0, h1) = split(&f, &b).map_err(|e| e.to_string())?;
        let v = check_split_conditions(&m, &f, &b, &h0, &h1).map_err(|e| e.to_string())?;
        ensure(v.is_empty(), || format!("query {q}: {}", v[0]))?;
        ensure(split_is_sound(&f, &b, &h0, &h1), || {
            format!("query {q}: oracle disagrees")
        })?;
    }

    let blind = WithSplit::new(&m, |f: &Antichain, _: &[Antichain]| m.split(f, &[]));
    let corrupted = verify_splitting_class(&blind, 16);
    ensure(!corrupted.passed(), || {
        "corrupted oracle not flagged".into()
    })?;
    Ok(format!(
        "{} samples at depth 16, 100 doubled one-sided queries, corrupted oracle flagged on {} samples",
        report.samples,
        corrupted.failures.len()
    ))
}

fn bounded_ipc() -> Check {
    let valid = [
        "p -> p",
        "p -> (q -> p)",
        "bot -> p",
        "((p -> q) & (q -> r)) -> (p -> r)",
        "~~(p | ~p)",
    ];
    let refuted = [
        "p | ~p",
        "~p | ~~p",
        "((p -> q) -> p) -> p",
        "(p -> q) | (q -> p)",
        "~~p -> p",
    ];
    for text in valid {
        let f: Formula = parse(text).unwrap();
        let verdict = ipc_check_bounded(&f, 4).map_err(|e| e.to_string())?;
        ensure(
            verdict == IpcVerdict::ValidUpToBound { max_height: 4 },
            || format!("{text} refuted"),
        )?;
    }
    for text in refuted {
        let f = parse(text).unwrap();
        match ipc_check_bounded(&f, 3).map_err(|e| e.to_string())? {
            IpcVerdict::Countermodel { height, model } => {
                ensure(height <= 3, || format!("{text}: height {height}"))?;
                let forced = forces(&model.frame, model.point, &model.valuation, &f).unwrap();
                ensure(!forced, || format!("{text}: countermodel does not refute"))?;
            }
            IpcVerdict::ValidUpToBound { .. } => return Err(format!("{text} not refuted")),
        }
    }
    Ok("5 valid up to height 4, 5 refuted within height 3 and re-verified".into())
}

fn main() {
    type Criterion = (&'static str, u64, fn() -> Check);
    let criteria: [Criterion; 10] = [
        ("Brouwer validity of upset algebras", 60, brouwer_validity),
        ("soundness of IPC theorems", 120, soundness),
        ("weak excluded middle separation", 60, weak_lem),
        ("Muchnik degrees vs upsets isomorphism", 60, muchnik_iso),
        (
            "quotient by a principal filter vs interval",
            120,
            quotient_interval,
        ),
        ("frame/algebra theory agreement", 60, mode_agreement),
        ("p-morphism theory transfer", 60, pmorphism_transfer),
        (
            "splitting construction end to end",
            30,
            splitting_end_to_end,
        ),
        ("splitting condition checks", 60, splitting_checks),
        ("bounded IPC classification", 30, bounded_ipc),
    ];
    let mut failed = 0;
    let mut summary = BTreeMap::new();
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(limit);
        let (ok, detail) = match outcome {
            Ok(d) if in_time => (true, d),
            Ok(d) => (false, format!("{d}; exceeded {limit}s")),
            Err(e) => (false, e),
        };
        failed += usize::from(!ok);
        println!(
            "criterion {:>2} {} {name}: {detail} [{:.2}s, limit {limit}s]",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
        );
        summary.insert(i + 1, ok);
    }
    println!(
        "acceptance: {} of {} criteria passed",
        summary.len() - failed,
        summary.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
