//! Command-line interface: enumeration, verification, oracle queries,
//! irreducibility tests and rendering.
//!
//! Exit codes: 0 success (for `irreducible`: the module is irreducible),
//! 1 reducible, 2 invalid configuration or input, 3 truncated records
//! under --strict, 4 verification failure.

use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;

use slverma::algebra::{parse_rational, vanishes_up_to, TruncationPolicy};
use slverma::json::{
    enumeration_to_json, irreducible_to_json, oracle_to_json, record_from_json, weight_from_json,
    EnumerationJson,
};
use slverma::operators::{apply_d, weight_eigenvalues, Weight};
use slverma::oracle::{in_span, raise, singular_kernel, tau_inv, WeightDrop};
use slverma::render::{latex_pbw_vector, latex_record, text_record};
use slverma::singular::{
    build_eta_product, default_policy, enumerate_solutions, iota_exponents, irreducible,
    ExponentPlan, PolyVerdict,
};
use slverma::SimpleRootMap;

const USAGE: &str = "usage: slverma <command> [options]

commands:
  enumerate    --n N --weight a,b,..   [--depth D] [--format json|text|latex]
               [--strict] [--output PATH]
  verify       <records.json>
  oracle       --n N --weight a,b,..   --drop k1,k2,.. [--format ..] [--output PATH]
  irreducible  --n N --weight a,b,..   [--format ..]
  render       <records.json>          [--format latex|text|json] [--output PATH]
  check        [--n N] [--seed S] [--count K] [--depth D]

weights and exponents are exact rationals: integers or p/q (no decimals).";

struct Args {
    command: String,
    positional: Vec<String>,
    values: BTreeMap<String, String>,
    strict: bool,
}

fn parse_args(argv: &[String]) -> Result<Args, String> {
    if argv.is_empty() {
        return Err("missing command".into());
    }
    let command = argv[0].clone();
    let mut positional = Vec::new();
    let mut values = BTreeMap::new();
    let mut strict = false;
    let mut k = 1;
    while k < argv.len() {
        let arg = &argv[k];
        if arg == "--strict" {
            strict = true;
        } else if let Some(name) = arg.strip_prefix("--") {
            if let Some((key, value)) = name.split_once('=') {
                values.insert(key.to_string(), value.to_string());
            } else {
                k += 1;
                let value = argv
                    .get(k)
                    .ok_or_else(|| format!("flag --{name} needs a value"))?;
                values.insert(name.to_string(), value.clone());
            }
        } else {
            positional.push(arg.clone());
        }
        k += 1;
    }
    Ok(Args {
        command,
        positional,
        values,
        strict,
    })
}

fn parse_weight(args: &Args) -> Result<Weight, String> {
    let n: usize = args
        .values
        .get("n")
        .ok_or("missing --n")?
        .parse()
        .map_err(|_| "bad --n".to_string())?;
    let raw = args.values.get("weight").ok_or("missing --weight")?;
    let entries: Vec<String> = raw.split(',').map(|s| s.to_string()).collect();
    weight_from_json(n, &entries).map_err(|e| e.to_string())
}

fn parse_policy(args: &Args, lam: &Weight) -> Result<TruncationPolicy, String> {
    match args.values.get("depth") {
        None => Ok(default_policy(lam)),
        Some(raw) => {
            let depth: u32 = raw.parse().map_err(|_| "bad --depth".to_string())?;
            if depth == 0 {
                return Err("--depth must be >= 1".into());
            }
            Ok(TruncationPolicy::new(depth))
        }
    }
}

fn format_of(args: &Args) -> String {
    args.values
        .get("format")
        .cloned()
        .unwrap_or_else(|| "json".to_string())
}

fn emit(args: &Args, content: &str) -> Result<(), String> {
    match args.values.get("output") {
        None => {
            println!("{content}");
            Ok(())
        }
        Some(path) => std::fs::write(path, format!("{content}\n")).map_err(|e| e.to_string()),
    }
}

fn cmd_enumerate(args: &Args) -> Result<u8, String> {
    let lam = parse_weight(args)?;
    let policy = parse_policy(args, &lam)?;
    let records = enumerate_solutions(&lam, policy);
    let truncated = records.iter().filter(|r| !r.exact).count();
    let content = match format_of(args).as_str() {
        "json" => {
            let doc = enumeration_to_json(&lam, policy.depth(), &records);
            serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?
        }
        "text" => records
            .iter()
            .map(text_record)
            .collect::<Vec<_>>()
            .join("\n"),
        "latex" => records
            .iter()
            .map(latex_record)
            .collect::<Vec<_>>()
            .join("\n"),
        other => return Err(format!("unknown format {other:?}")),
    };
    emit(args, &content)?;
    if args.strict && truncated > 0 {
        eprintln!(
            "{truncated} record(s) are unknown-truncated at depth {}",
            policy.depth()
        );
        return Ok(3);
    }
    Ok(0)
}

fn cmd_verify(args: &Args) -> Result<u8, String> {
    let path = args
        .positional
        .first()
        .ok_or("verify needs a records file")?;
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let doc: EnumerationJson = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let lam = weight_from_json(doc.n, &doc.weight).map_err(|e| e.to_string())?;
    let n = lam.n();
    let mut failures = 0usize;
    for (k, rec_json) in doc.records.iter().enumerate() {
        let mut rec = match record_from_json(rec_json) {
            Ok(r) => r,
            Err(e) => {
                eprintln!("record {k}: unreadable: {e}");
                failures += 1;
                continue;
            }
        };
        if !rec.exact {
            rec.series.mark_truncated(doc.depth);
        }
        let label = rec
            .index
            .as_ref()
            .map(|i| format!("{i}"))
            .unwrap_or_else(|| format!("#{k}"));
        match weight_eigenvalues(&lam, &rec.series) {
            Ok(Some(w)) if w == rec.weight => {}
            _ => {
                eprintln!("record {label}: weight mismatch or unweighted series");
                failures += 1;
                continue;
            }
        }
        let front = rec.series.simple_front();
        let tolerance = doc.depth.saturating_sub(2);
        for i in 1..n {
            let image = apply_d(i, &lam, &rec.series).map_err(|e| e.to_string())?;
            let ok = if rec.exact {
                image.is_zero()
            } else {
                vanishes_up_to(&image, &front, tolerance)
            };
            if !ok {
                eprintln!("record {label}: d_{i} does not annihilate the series");
                failures += 1;
            }
        }
        if rec.polynomial == PolyVerdict::Yes {
            let ok = (|| {
                let vec = tau_inv(&rec.series).ok()?;
                for i in 1..n {
                    if !raise(i, &lam, &vec).ok()?.is_zero() {
                        return Some(false);
                    }
                }
                let drop = rec.drop_from_plan(n)?;
                let kernel = singular_kernel(&lam, &drop).ok()?;
                Some(in_span(&kernel, &vec))
            })()
            .unwrap_or(false);
            if !ok {
                eprintln!("record {label}: oracle rejects the polynomial record");
                failures += 1;
            }
        }
    }
    if failures > 0 {
        eprintln!("{failures} verification failure(s)");
        Ok(4)
    } else {
        Ok(0)
    }
}

fn cmd_oracle(args: &Args) -> Result<u8, String> {
    let lam = parse_weight(args)?;
    let raw = args.values.get("drop").ok_or("missing --drop")?;
    let mut entries = Vec::new();
    for part in raw.split(',') {
        let v: u32 = part
            .trim()
            .parse()
            .map_err(|_| format!("bad drop entry {part:?}"))?;
        entries.push(v);
    }
    if entries.len() != lam.n() - 1 {
        return Err(format!(
            "drop needs {} entries, got {}",
            lam.n() - 1,
            entries.len()
        ));
    }
    let drop = WeightDrop::new(entries);
    let kernel = singular_kernel(&lam, &drop).map_err(|e| e.to_string())?;
    let content = match format_of(args).as_str() {
        "json" => serde_json::to_string_pretty(&oracle_to_json(&lam, &drop, &kernel))
            .map_err(|e| e.to_string())?,
        "text" => {
            let mut lines = vec![format!(
                "kernel at drop {drop} for weight {lam}: dimension {}",
                kernel.len()
            )];
            lines.extend(kernel.iter().map(|v| format!("  {v}")));
            lines.join("\n")
        }
        "latex" => kernel
            .iter()
            .map(latex_pbw_vector)
            .collect::<Vec<_>>()
            .join("\n"),
        other => return Err(format!("unknown format {other:?}")),
    };
    emit(args, &content)?;
    Ok(0)
}

fn cmd_irreducible(args: &Args) -> Result<u8, String> {
    let lam = parse_weight(args)?;
    let report = irreducible(&lam);
    let content = match format_of(args).as_str() {
        "json" => serde_json::to_string_pretty(&irreducible_to_json(&lam, &report))
            .map_err(|e| e.to_string())?,
        _ => {
            let mut lines = vec![format!(
                "weight {lam}: {}",
                if report.irreducible {
                    "irreducible"
                } else {
                    "reducible"
                }
            )];
            for seg in report.triggering() {
                lines.push(format!(
                    "  segment {}..={}: length + sum = {} (positive integer)",
                    seg.start, seg.end, seg.value
                ));
            }
            if report.readings_diverge() {
                lines.push(
                    "  note: a segment sums to 0; under the nonnegative-integer reading \
                     this weight would count as reducible"
                        .to_string(),
                );
            }
            lines.join("\n")
        }
    };
    emit(args, &content)?;
    Ok(if report.irreducible { 0 } else { 1 })
}

fn cmd_render(args: &Args) -> Result<u8, String> {
    let path = args
        .positional
        .first()
        .ok_or("render needs a records file")?;
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let doc: EnumerationJson = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let records = doc
        .records
        .iter()
        .map(record_from_json)
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let content = match format_of(args).as_str() {
        "json" => serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?,
        "text" => records
            .iter()
            .map(text_record)
            .collect::<Vec<_>>()
            .join("\n"),
        _ => records
            .iter()
            .map(latex_record)
            .collect::<Vec<_>>()
            .join("\n"),
    };
    emit(args, &content)?;
    Ok(0)
}

/// Deterministic self-check: random eta-power products are solutions of
/// the raising system, within the reported depth.
fn cmd_check(args: &Args) -> Result<u8, String> {
    let n: usize = args
        .values
        .get("n")
        .map(|v| v.parse())
        .transpose()
        .map_err(|_| "bad --n".to_string())?
        .unwrap_or(3);
    if n < 2 {
        return Err("--n must be >= 2".into());
    }
    let seed: u64 = args
        .values
        .get("seed")
        .map(|v| v.parse())
        .transpose()
        .map_err(|_| "bad --seed".to_string())?
        .unwrap_or(0);
    let count: usize = args
        .values
        .get("count")
        .map(|v| v.parse())
        .transpose()
        .map_err(|_| "bad --count".to_string())?
        .unwrap_or(10);
    let depth: u32 = args
        .values
        .get("depth")
        .map(|v| v.parse())
        .transpose()
        .map_err(|_| "bad --depth".to_string())?
        .unwrap_or(10);
    let policy = TruncationPolicy::new(depth.max(1));
    let cmp_depth = depth.saturating_sub(2);

    let mut state = seed;
    let mut next = move || {
        state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    };
    let mut failures = 0usize;
    let mut out = Vec::new();
    for case in 0..count {
        let len = 1 + (next() % 4) as usize;
        let mut roots = Vec::new();
        let mut last = 0usize;
        for _ in 0..len {
            let mut r = 1 + (next() % (n as u64 - 1)) as usize;
            while r == last {
                r = 1 + (next() % (n as u64 - 1)) as usize;
            }
            roots.push(r);
            last = r;
        }
        let lambda: Vec<_> = (1..n)
            .map(|_| {
                let num = (next() % 9) as i64 - 4;
                let den = 1 + (next() % 3) as i64;
                parse_rational(&format!("{num}/{den}")).unwrap()
            })
            .collect();
        let lam = Weight::new(n, lambda).map_err(|e| e.to_string())?;
        let map = SimpleRootMap::new(n, roots).map_err(|e| e.to_string())?;
        let iotas = iota_exponents(&map, &lam);
        let plan = ExponentPlan::new(map.values().iter().copied().zip(iotas).collect())
            .map_err(|e| e.to_string())?;
        let series = build_eta_product(&plan, policy);
        let front = plan.drop_by_root();
        let mut ok = true;
        for i in 1..n {
            let image = apply_d(i, &lam, &series).map_err(|e| e.to_string())?;
            if !vanishes_up_to(&image, &front, cmp_depth) {
                ok = false;
            }
        }
        out.push(format!(
            "case {case}: weight {lam}, plan {plan}: {}",
            if ok { "ok" } else { "FAILED" }
        ));
        if !ok {
            failures += 1;
        }
    }
    out.push(format!(
        "{}/{count} randomized solution checks passed (seed {seed}, depth {depth})",
        count - failures
    ));
    emit(args, &out.join("\n"))?;
    Ok(if failures == 0 { 0 } else { 4 })
}

fn check_flags(args: &Args, allowed: &[&str]) -> Result<(), String> {
    for key in args.values.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(format!("unknown flag --{key} for {}", args.command));
        }
    }
    Ok(())
}

fn dispatch(args: &Args) -> Result<u8, String> {
    match args.command.as_str() {
        "enumerate" => {
            check_flags(args, &["n", "weight", "depth", "format", "seed", "output"])?;
            cmd_enumerate(args)
        }
        "verify" => {
            check_flags(args, &["format", "seed", "output"])?;
            cmd_verify(args)
        }
        "oracle" => {
            check_flags(args, &["n", "weight", "drop", "format", "seed", "output"])?;
            cmd_oracle(args)
        }
        "irreducible" => {
            check_flags(args, &["n", "weight", "format", "seed", "output"])?;
            cmd_irreducible(args)
        }
        "render" => {
            check_flags(args, &["format", "output"])?;
            cmd_render(args)
        }
        "check" => {
            check_flags(args, &["n", "seed", "count", "depth", "output"])?;
            cmd_check(args)
        }
        other => Err(format!("unknown command {other:?}")),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    if argv.is_empty() || argv[0] == "--help" || argv[0] == "-h" || argv[0] == "help" {
        let _ = writeln!(std::io::stderr(), "{USAGE}");
        return ExitCode::from(2);
    }
    match parse_args(&argv).and_then(|args| dispatch(&args)) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            let _ = writeln!(std::io::stderr(), "error: {msg}");
            ExitCode::from(2)
        }
    }
}
