//! Subcommand handlers. Each returns whether the checked property holds.

use std::collections::BTreeMap;
use std::path::PathBuf;

use muchnik_core::corpus;
use muchnik_core::dot::{countermodel_dot, frame_dot, pmorphism_dot};
use muchnik_core::logic::{algebra_countervaluation, frame_countermodel, CountermodelJson};
use muchnik_core::splitting::SplittingError;
use muchnik_core::{
    build_pmorphism, build_until_complete, enumerate_upsets, interval_algebra, ipc_check_bounded,
    iso_check, pmorphism_of, quotient, search_pmorphism, theory_contains, upset_algebra,
    verify_brouwer, verify_pmorphism, verify_splitting_class, BrouwerAlgebra, Countermodel,
    IpcVerdict, PMorphism, PMorphismJson, Structure, SyntheticAntichainModel,
};
use serde::Serialize;
use serde_json::json;

use crate::input::{
    load_algebra, load_formula, load_poset, read_json, read_text, write_text, CliError,
};
use crate::{
    AlgebraCmd, CheckArgs, Command, DotCmd, Mode, ModelArgs, MuchnikCmd, PmorphismCmd, SplitCmd,
};

fn emit<T: Serialize>(v: &T) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

pub fn run(cmd: Command, json: bool) -> Result<bool, CliError> {
    match cmd {
        Command::Upsets { frame } => upsets(&frame, json),
        Command::Algebra(c) => algebra(c, json),
        Command::Muchnik(MuchnikCmd::IsoCheck { frame }) => muchnik_iso(&frame, json),
        Command::Check(args) => check(args, json),
        Command::Theory { frame, corpus } => theory(&frame, corpus.as_deref(), json),
        Command::Ipc {
            formula,
            max_height,
        } => ipc(&formula, max_height),
        Command::Pmorphism(c) => pmorphism(c, json),
        Command::Split(c) => split(c, json),
        Command::ExportDot(c) => export_dot(c),
    }
}

fn upsets(frame: &str, json: bool) -> Result<bool, CliError> {
    let p = load_poset(frame)?;
    let ups = enumerate_upsets(&p).map_err(CliError::input)?;
    if json {
        emit(&ups.iter().map(|u| u.labels(&p)).collect::<Vec<_>>());
    } else {
        for u in &ups {
            println!("{}", u.display(&p));
        }
        println!("{} upsets", ups.len());
    }
    Ok(true)
}

fn algebra(cmd: AlgebraCmd, json: bool) -> Result<bool, CliError> {
    match cmd {
        AlgebraCmd::Verify { algebra } => {
            let b = load_algebra(&algebra)?;
            let report = verify_brouwer(&b);
            if json {
                emit(&report);
            } else if report.is_valid() {
                println!("valid Brouwer algebra with {} elements", b.len());
            } else {
                println!("{} violations", report.violations.len());
                for v in &report.violations {
                    println!("  {v:?}");
                }
            }
            Ok(report.is_valid())
        }
        AlgebraCmd::Quotient { algebra, by } => {
            let b = load_algebra(&algebra)?;
            let x = b.index_of(&by).map_err(CliError::input)?;
            let q = quotient(&b, x).map_err(CliError::input)?;
            let valid = verify_brouwer(&q.algebra).is_valid();
            let (interval, hom) = interval_algebra(&b, x).map_err(CliError::input)?;
            let iso = hom.verify(&interval, &q.algebra).is_empty();
            let classes: BTreeMap<&str, &str> = (0..b.len())
                .map(|y| (b.label(y), q.algebra.label(q.projection[y])))
                .collect();
            if json {
                emit(&json!({
                    "quotient": q.algebra.to_json(),
                    "classes": classes,
                    "valid": valid,
                    "isomorphic_to_interval": iso,
                }));
            } else {
                println!(
                    "{} classes, {} interval elements",
                    q.algebra.len(),
                    interval.len()
                );
                for (y, c) in &classes {
                    println!("  {y} -> {c}");
                }
                println!("Brouwer axioms: {}", if valid { "ok" } else { "violated" });
                println!("isomorphic to interval: {}", if iso { "yes" } else { "no" });
            }
            Ok(valid && iso)
        }
        AlgebraCmd::Dump { algebra } => {
            emit(&load_algebra(&algebra)?.to_json());
            Ok(true)
        }
    }
}

fn muchnik_iso(frame: &str, json: bool) -> Result<bool, CliError> {
    let p = load_poset(frame)?;
    let report = iso_check(&p).map_err(CliError::input)?;
    if json {
        emit(&report);
    } else {
        println!(
            "{} mass problems, {} degrees, {} upsets, {} violations",
            report.mass_problems,
            report.degrees,
            report.upsets,
            report.violations.len()
        );
        for v in report.violations.iter().take(10) {
            println!("  {v:?}");
        }
    }
    Ok(report.is_valid())
}

fn algebra_check(b: &BrouwerAlgebra, text: &str, json: bool) -> Result<bool, CliError> {
    let f = load_formula(text)?;
    let counter = algebra_countervaluation(b, &f).map_err(CliError::input)?;
    let valuation: Option<BTreeMap<&String, &str>> = counter
        .as_ref()
        .map(|v| v.iter().map(|(k, &x)| (k, b.label(x))).collect());
    if json {
        emit(
            &json!({ "formula": f.to_string(), "holds": counter.is_none(), "valuation": valuation }),
        );
    } else if let Some(v) = &valuation {
        let parts: Vec<String> = v.iter().map(|(k, x)| format!("{k} = {x}")).collect();
        println!("fails under {}", parts.join(", "));
    } else {
        println!("holds");
    }
    Ok(counter.is_none())
}

fn check(args: CheckArgs, json: bool) -> Result<bool, CliError> {
    if let Some(arg) = &args.algebra {
        if args.mode == Some(Mode::Frame) {
            return Err(CliError::Input("frame mode needs --frame".into()));
        }
        return algebra_check(&load_algebra(arg)?, &args.formula, json);
    }
    let p = load_poset(args.frame.as_deref().expect("clap requires a structure"))?;
    if args.mode == Some(Mode::Algebra) {
        let b = upset_algebra(&p).map_err(CliError::input)?.algebra;
        return algebra_check(&b, &args.formula, json);
    }
    let f = load_formula(&args.formula)?;
    let cm = frame_countermodel(&p, &f).map_err(CliError::input)?;
    if json {
        emit(&json!({
            "formula": f.to_string(),
            "holds": cm.is_none(),
            "countermodel": cm.as_ref().map(Countermodel::to_json),
        }));
    } else if let Some(cm) = &cm {
        let parts: Vec<String> = cm
            .valuation
            .iter()
            .map(|(k, u)| format!("{k} = {}", u.display(&cm.frame)))
            .collect();
        println!(
            "fails at {} under {}",
            cm.frame.label(cm.point),
            parts.join(", ")
        );
    } else {
        println!("holds");
    }
    Ok(cm.is_none())
}

fn theory(frame: &str, corpus_path: Option<&str>, json: bool) -> Result<bool, CliError> {
    let p = load_poset(frame)?;
    let formulas = match corpus_path {
        Some(path) => corpus::parse_lines(&read_text(path)?)
            .map_err(|e| CliError::Input(format!("{path}: {e}")))?,
        None => corpus::mixed(),
    };
    let b = upset_algebra(&p).map_err(CliError::input)?.algebra;
    let mut rows = Vec::new();
    for f in &formulas {
        let fr = theory_contains(Structure::Frame(&p), f).map_err(CliError::input)?;
        let al = theory_contains(Structure::Algebra(&b), f).map_err(CliError::input)?;
        rows.push((f.to_string(), fr, al));
    }
    let agree = rows.iter().all(|(_, fr, al)| fr == al);
    if json {
        let list: Vec<_> = rows
            .iter()
            .map(|(f, fr, al)| json!({ "formula": f, "frame": fr, "algebra": al }))
            .collect();
        emit(&json!({ "agree": agree, "formulas": list }));
    } else {
        let mark = |b: bool| if b { "in " } else { "out" };
        println!("frame algebra formula");
        for (f, fr, al) in &rows {
            println!("{}   {}     {f}", mark(*fr), mark(*al));
        }
        let valid = rows.iter().filter(|r| r.1).count();
        println!(
            "{valid} of {} in the theory; modes {}",
            rows.len(),
            if agree { "agree" } else { "DISAGREE" }
        );
    }
    Ok(agree)
}

fn ipc(text: &str, max_height: usize) -> Result<bool, CliError> {
    let f = load_formula(text)?;
    let verdict = ipc_check_bounded(&f, max_height).map_err(CliError::input)?;
    match &verdict {
        IpcVerdict::ValidUpToBound { max_height } => {
            emit(&json!({
                "formula": f.to_string(),
                "verdict": "valid-up-to-bound",
                "max_height": max_height,
            }));
            eprintln!("{f}: no countermodel on trees up to height {max_height}");
        }
        IpcVerdict::Countermodel { height, model } => {
            emit(&json!({
                "formula": f.to_string(),
                "verdict": "refuted",
                "max_height": max_height,
                "height": height,
                "countermodel": model.to_json(),
            }));
            eprintln!(
                "{f}: refuted at {} of the tree of height {height}",
                model.frame.label(model.point)
            );
        }
    }
    Ok(!verdict.is_refuted())
}

fn load_pmorphism(file: &str) -> Result<PMorphism, CliError> {
    PMorphism::try_from(read_json::<PMorphismJson>(file)?)
        .map_err(|e| CliError::Input(format!("{file}: {e}")))
}

fn pmorphism(cmd: PmorphismCmd, json: bool) -> Result<bool, CliError> {
    match cmd {
        PmorphismCmd::Verify { file } => {
            let m = load_pmorphism(&file)?;
            let v = verify_pmorphism(&m);
            if json {
                emit(&json!({ "valid": v.is_empty(), "violations": v }));
            } else if v.is_empty() {
                println!(
                    "p-morphism: {} points onto {} points",
                    m.source.len(),
                    m.target.len()
                );
            } else {
                println!("{} violations", v.len());
                for x in &v {
                    println!("  {x:?}");
                }
            }
            Ok(v.is_empty())
        }
        PmorphismCmd::Search { source, target } => {
            let (s, t) = (load_poset(&source)?, load_poset(&target)?);
            match search_pmorphism(&s, &t).map_err(CliError::input)? {
                Some(m) => {
                    emit(&m.to_json());
                    Ok(true)
                }
                None => {
                    eprintln!("no p-morphism from {source} onto {target}");
                    Ok(false)
                }
            }
        }
    }
}

fn model(m: ModelArgs) -> SyntheticAntichainModel {
    SyntheticAntichainModel::shuffled(m.seed, m.window)
}

fn split(cmd: SplitCmd, json: bool) -> Result<bool, CliError> {
    match cmd {
        SplitCmd::Verify { depth, model: args } => {
            if depth == 0 {
                return Err(CliError::Input("depth must be at least 1".into()));
            }
            let report = verify_splitting_class(&model(args), depth);
            if json {
                emit(&report);
            } else {
                println!(
                    "{} samples at depth {depth}, {} failures",
                    report.samples,
                    report.failures.len()
                );
                for f in report.failures.iter().take(10) {
                    println!("  f={} B={:?}: {}", f.f, f.b, f.problems.join("; "));
                }
            }
            Ok(report.passed())
        }
        SplitCmd::Build {
            height,
            steps,
            cap,
            model: args,
            trace,
            partial_out,
        } => split_build(height, steps, cap, args, trace, partial_out),
    }
}

fn split_build(
    height: usize,
    steps: Option<usize>,
    cap: usize,
    args: ModelArgs,
    trace: Option<PathBuf>,
    partial_out: Option<PathBuf>,
) -> Result<bool, CliError> {
    let m = model(args);
    let built = match steps {
        Some(k) => build_pmorphism(&m, height, k),
        None => build_until_complete(&m, height, cap),
    };
    let b = match built {
        Ok(b) => b,
        Err(e @ (SplittingError::ZeroHeight | SplittingError::ZeroSteps)) => {
            return Err(CliError::input(e))
        }
        Err(e) => {
            eprintln!("construction failed: {e}");
            return Ok(false);
        }
    };
    if let Some(path) = &trace {
        let lines: String = b
            .trace
            .iter()
            .map(|r| serde_json::to_string(r).expect("serializable") + "\n")
            .collect();
        write_text(path, &lines)?;
    }
    if let Some(path) = &partial_out {
        let text = serde_json::to_string_pretty(&b.alpha.to_json()).expect("serializable");
        write_text(path, &(text + "\n"))?;
    }
    match pmorphism_of(&m, &b.alpha) {
        Ok(p) => {
            emit(&p.to_json());
            eprintln!(
                "{} rounds, {} mapped elements, {} in the finished part",
                b.rounds,
                b.alpha.len(),
                p.source.len()
            );
            Ok(true)
        }
        Err(e) => {
            eprintln!("{e}");
            Ok(false)
        }
    }
}

fn load_countermodel(file: &str) -> Result<Countermodel, CliError> {
    let mut v: serde_json::Value = read_json(file)?;
    if let Some(inner) = v.get_mut("countermodel") {
        v = inner.take();
    }
    if v.is_null() {
        return Err(CliError::Input(format!("{file}: no countermodel")));
    }
    let j: CountermodelJson =
        serde_json::from_value(v).map_err(|e| CliError::Input(format!("{file}: {e}")))?;
    Countermodel::try_from(j).map_err(|e| CliError::Input(format!("{file}: {e}")))
}

fn export_dot(cmd: DotCmd) -> Result<bool, CliError> {
    let (text, output) = match cmd {
        DotCmd::Frame { frame, output } => (frame_dot(&load_poset(&frame)?), output),
        DotCmd::Pmorphism { file, output } => (pmorphism_dot(&load_pmorphism(&file)?), output),
        DotCmd::Countermodel { file, output } => {
            (countermodel_dot(&load_countermodel(&file)?), output)
        }
    };
    match output {
        Some(path) => write_text(&path, &text)?,
        None => print!("{text}"),
    }
    Ok(true)
}
