use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use msrlab::invariant::PrefixOrder;
use msrlab::repair::{erase, evenodd_code, evenodd_repair, evenodd_scheme, extract_family_unchecked, EvenoddNode};
use msrlab::selftest::run_selftest;
use msrlab::sweep::{sweep, to_csv, SweepConfig};
use msrlab::{
    check_msr_scheme, construct_tensor_family, cutset_bound, decay_trace, repair_node, FieldSpec, MsrSubspaceFamily,
    RepairScheme, VectorCodeSystematic,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::{Command, Format};

pub enum Status {
    Pass,
    /// Machine-readable failure report, printed on stdout.
    Fail(Value),
}

pub fn run(cmd: Command) -> Result<Status> {
    match cmd {
        Command::Construct { r, m, p, lambda, out } => construct(r, m, p, lambda, out.as_deref()),
        Command::Verify { input } => verify(&input),
        Command::Bound { input } => bound(&input),
        Command::Decay { input, order, out } => decay(&input, &order, out.as_deref()),
        Command::Sweep { r, m, p, lambda, ceiling, format, verify, out } => {
            let cfg = SweepConfig { rs: r, ms: m, field: FieldSpec::new(p)?, lambda, ceiling, verify };
            run_sweep(&cfg, format, out.as_deref())
        }
        Command::Evenodd { repair, data, write_code, write_scheme } => {
            evenodd(&repair, data.as_deref(), write_code.as_deref(), write_scheme.as_deref())
        }
        Command::RepairCheck { code, scheme, node, seed } => repair_check(&code, &scheme, node, seed),
        Command::Extract { code, scheme, out } => extract(&code, &scheme, out.as_deref()),
        Command::Cutset { n, k, ell } => {
            let b = cutset_bound(n, k, ell)?;
            if b.is_integer() {
                println!("{b}");
            } else {
                println!("{b} ({:.6})", *b.numer() as f64 / *b.denom() as f64);
            }
            Ok(Status::Pass)
        }
        Command::Selftest { seed, json } => selftest(seed, json),
    }
}

/// The exact command line, for replaying a failure.
fn replay() -> String {
    std::env::args().collect::<Vec<_>>().join(" ")
}

fn failure(command: &str, details: impl Serialize, instance: impl Serialize) -> Result<Status> {
    Ok(Status::Fail(json!({
        "command": command,
        "status": "fail",
        "replay": replay(),
        "details": details,
        "instance": instance,
    })))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn construct(r: usize, m: usize, p: u64, lambda: u32, out: Option<&Path>) -> Result<Status> {
    let fam = construct_tensor_family(r, m, FieldSpec::new(p)?, lambda)?;
    emit(out, &to_json(&fam)?)?;
    if let Some(path) = out {
        eprintln!("wrote family {} to {}", fam.label(), path.display());
    }
    Ok(Status::Pass)
}

fn verify(input: &Path) -> Result<Status> {
    let fam: MsrSubspaceFamily = read_json(input)?;
    let report = fam.verify()?;
    if !report.passed {
        let details = json!({
            "singular_maps": report.singular_maps(),
            "direct_sum_failures": report.direct_sum_failures(),
            "invariance_failures": report.invariance_failures().collect::<Vec<_>>(),
        });
        return failure("verify", details, &fam);
    }
    println!("pass k={} ell={} r={} p={}", report.k, report.ell, report.r, report.p);
    Ok(Status::Pass)
}

fn bound(input: &Path) -> Result<Status> {
    let fam: MsrSubspaceFamily = read_json(input)?;
    let report = fam.bound_check();
    if !report.passed {
        return failure("bound", &report, &fam);
    }
    if report.applicable {
        println!("pass k={} bound={:.6} ratio={:.6}", report.k, report.bound, report.k as f64 / report.bound);
    } else {
        println!("not applicable (r = {}) k={}", report.r, report.k);
    }
    Ok(Status::Pass)
}

fn decay(input: &Path, order: &str, out: Option<&Path>) -> Result<Status> {
    let fam: MsrSubspaceFamily = read_json(input)?;
    let order: PrefixOrder = order.parse()?;
    let trace = decay_trace(&fam, &order)?;
    emit(out, &trace.to_csv())?;
    if !trace.passed() {
        let details = json!({
            "order": trace.order,
            "dims": trace.dims(),
            "first_violation": trace.first_violation(),
        });
        return failure("decay", details, &fam);
    }
    Ok(Status::Pass)
}

fn run_sweep(cfg: &SweepConfig, format: Format, out: Option<&Path>) -> Result<Status> {
    let rows = sweep(cfg)?;
    let text = match format {
        Format::Csv => to_csv(&rows),
        Format::Json => to_json(&rows)?,
    };
    emit(out, &text)?;
    let bad: Vec<_> = rows.iter().filter(|r| !r.within_bound || r.verified == Some(false)).collect();
    if !bad.is_empty() {
        return failure("sweep", &bad, json!({ "r": cfg.rs, "m": cfg.ms, "p": cfg.field.p(), "lambda": cfg.lambda }));
    }
    Ok(Status::Pass)
}

const EVENODD_SYMBOLS: [&str; 4] = ["a1", "a2", "b1", "b2"];

fn data_blocks(bits: [u32; 4]) -> Vec<Vec<u32>> {
    vec![vec![bits[0], bits[1]], vec![bits[2], bits[3]]]
}

/// Writes a GF(2) linear form as a sum of data symbols.
fn describe(coeffs: &[u32]) -> String {
    let terms: Vec<&str> = coeffs.iter().zip(EVENODD_SYMBOLS).filter(|(&c, _)| c == 1).map(|(_, s)| s).collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn evenodd(node: &str, data: Option<&[u32]>, code_out: Option<&Path>, scheme_out: Option<&Path>) -> Result<Status> {
    let node: EvenoddNode = node.parse()?;
    let code = evenodd_code();
    if let Some(path) = code_out {
        fs::write(path, to_json(&code)?).with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = scheme_out {
        fs::write(path, to_json(&RepairScheme::General(evenodd_scheme()))?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let names = EvenoddNode::ALL;

    if let Some(bits) = data {
        if bits.len() != 4 || bits.iter().any(|&b| b > 1) {
            bail!("--data takes four bits a1,a2,b1,b2");
        }
        let cw = code.encode(&data_blocks([bits[0], bits[1], bits[2], bits[3]]))?;
        let outcome = evenodd_repair(node, &cw)?;
        println!("codeword {}", cw.iter().map(|b| format!("{b:?}")).collect::<Vec<_>>().join(" "));
        for t in &outcome.transmissions {
            println!("  {} sends {:?}", names[t.helper], t.symbols);
        }
        println!("repaired {node} = {:?}, {} symbols downloaded", outcome.block, outcome.bandwidth.total);
        if outcome.block != cw[node.index()] {
            return failure("evenodd", json!({ "node": node.to_string(), "got": outcome.block }), &cw);
        }
        return Ok(Status::Pass);
    }

    // every transmitted symbol is linear in the data, so unit inputs give its coefficients
    let mut forms: Vec<(usize, Vec<u32>)> = Vec::new();
    for (pos, _) in EVENODD_SYMBOLS.iter().enumerate() {
        let mut bits = [0; 4];
        bits[pos] = 1;
        let outcome = evenodd_repair(node, &code.encode(&data_blocks(bits))?)?;
        if forms.is_empty() {
            forms = outcome.transmissions.iter().map(|t| (t.helper, vec![0; 4])).collect();
        }
        for ((_, form), t) in forms.iter_mut().zip(&outcome.transmissions) {
            form[pos] = t.symbols[0];
        }
    }
    let mut bad = Vec::new();
    let mut total = 0;
    for word in 0u32..16 {
        let bits = [word & 1, (word >> 1) & 1, (word >> 2) & 1, (word >> 3) & 1];
        let cw = code.encode(&data_blocks(bits))?;
        let outcome = evenodd_repair(node, &cw)?;
        total = outcome.bandwidth.total;
        if outcome.block != cw[node.index()] {
            bad.push(bits);
        }
    }
    println!("repair {node}: download {total} symbols (cutset {})", cutset_bound(4, 2, 2)?);
    for (helper, form) in &forms {
        println!("  {} sends {}", names[*helper], describe(form));
    }
    if !bad.is_empty() {
        return failure("evenodd", json!({ "node": node.to_string(), "failing_data": bad }), &code);
    }
    println!("verified on all 16 codewords");
    Ok(Status::Pass)
}

fn repair_check(code_path: &Path, scheme_path: &Path, node: Option<usize>, seed: u64) -> Result<Status> {
    let code: VectorCodeSystematic = read_json(code_path)?;
    let scheme: RepairScheme = read_json(scheme_path)?;
    let general = scheme.to_general();
    let nodes: Vec<usize> = match node {
        Some(m) if m >= code.k() => bail!("node {m} is not systematic (k = {})", code.k()),
        Some(m) => vec![m],
        None => (0..code.k()).collect(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data: Vec<Vec<u32>> =
        (0..code.k()).map(|_| (0..code.ell()).map(|_| rng.gen_range(0..code.field().p())).collect()).collect();
    let cw = code.encode(&data)?;
    let cutset = cutset_bound(code.n(), code.k(), code.ell())?;
    let mut failed = Vec::new();
    for m in nodes {
        let report = check_msr_scheme(&code, &general, m)?;
        if !report.passed {
            failed.push(json!({ "node": m, "report": report }));
            println!("node {m}: FAIL");
            continue;
        }
        let outcome = repair_node(&code, &general, m, &erase(&cw, m))?;
        let exact = outcome.block == cw[m];
        println!(
            "node {m}: pass, downloaded {} (cutset {cutset}), per helper {:?}, recovered {}",
            outcome.bandwidth.total,
            outcome.bandwidth.per_helper.iter().map(|&(_, b)| b).collect::<Vec<_>>(),
            exact
        );
        if !exact || !outcome.bandwidth.meets_cutset() {
            failed.push(json!({ "node": m, "recovered": exact, "bandwidth": outcome.bandwidth, "codeword": cw }));
        }
    }
    if !failed.is_empty() {
        return failure("repair-check", failed, json!({ "code": code, "scheme": scheme, "seed": seed }));
    }
    Ok(Status::Pass)
}

fn extract(code_path: &Path, scheme_path: &Path, out: Option<&Path>) -> Result<Status> {
    let code: VectorCodeSystematic = read_json(code_path)?;
    let scheme = match read_json(scheme_path)? {
        RepairScheme::Constant(c) => c,
        RepairScheme::General(_) => bail!("extraction needs a constant repair scheme"),
    };
    let general = scheme.to_general();
    let mut bad = Vec::new();
    for m in 0..code.k() {
        let report = check_msr_scheme(&code, &general, m)?;
        if !report.passed {
            bad.push(report);
        }
    }
    let instance = json!({ "code": code, "scheme": RepairScheme::Constant(scheme.clone()) });
    if !bad.is_empty() {
        return failure("extract", json!({ "scheme_failures": bad }), instance);
    }
    let fam = extract_family_unchecked(&code, &scheme)?;
    emit(out, &to_json(&fam)?)?;
    let report = fam.verify()?;
    if !report.passed {
        return failure("extract", json!({ "verify": report }), instance);
    }
    eprintln!("extracted family {} passes verify", fam.label());
    Ok(Status::Pass)
}

fn selftest(seed: u64, json: bool) -> Result<Status> {
    let report = run_selftest(seed)?;
    if json {
        print!("{}", to_json(&report)?);
    } else {
        print!("{}", report.to_text());
    }
    if !report.passed() {
        let failing: Vec<_> = report.checks.iter().filter(|c| !c.passed()).collect();
        return failure("selftest", failing, json!({ "seed": seed }));
    }
    Ok(Status::Pass)
}
