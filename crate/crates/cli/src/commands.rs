use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use rayon::prelude::*;
use serde_json::json;

use tnim_core::dynsys::{
    check_band_induction, check_d3_conjecture, find_orbit, sweep_d1, D1Seed, DkState, DynError, Sampling,
};
use tnim_core::periodicity::{detect_period, row_period, PeriodMode, PeriodReport};
use tnim_core::plot::{emit_plot, ImageFormat, PlotKind, PlotSpec};
use tnim_core::rays::{shadow_csv, shadow_map, BoxBarrier, CompletionSource, Ray, RayError, World};
use tnim_core::tree::TreeError;
use tnim_core::tripod::{
    band_detect, encode_tnim, generate_array, generate_array_by_layers, leading_rows, near_equivalence_check,
    read_tnim, to_csv, write_tnim, ArrayStore, CompletionArray, TNIM_VERSION,
};
use tnim_core::{misere_outcome, nim_outcome, nim_sum, TreePosition, TreeSolver};

use crate::args::*;

pub enum Verdict {
    Success,
    Negative,
}

pub enum Failure {
    Negative(anyhow::Error),
    Usage(anyhow::Error),
    Invariant(anyhow::Error),
}

type CmdResult = Result<Verdict, Failure>;

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Usage(e.into())
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.into())
    }
}

impl From<TreeError> for Failure {
    fn from(e: TreeError) -> Self {
        Failure::Usage(e.into())
    }
}

impl From<RayError> for Failure {
    fn from(e: RayError) -> Self {
        match e {
            RayError::LemmaViolation { .. } => Failure::Invariant(e.into()),
            other => Failure::Usage(other.into()),
        }
    }
}

impl From<DynError> for Failure {
    fn from(e: DynError) -> Self {
        match e {
            DynError::NoEligibleZero { .. } | DynError::NoCycle { .. } => Failure::Negative(e.into()),
            other => Failure::Usage(other.into()),
        }
    }
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Success
    } else {
        Verdict::Negative
    }
}

fn emit_json(v: &impl serde::Serialize) -> Result<(), Failure> {
    let s = serde_json::to_string(v).map_err(usage)?;
    println!("{s}");
    Ok(())
}

fn write_out(out: &str, bytes: &[u8]) -> Result<(), Failure> {
    if out == "-" {
        std::io::stdout().lock().write_all(bytes)?;
    } else {
        fs::write(out, bytes).with_context(|| format!("writing {out}")).map_err(usage)?;
    }
    Ok(())
}

pub fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Nim(cmd) => nim(cli, cmd),
        Command::Solve(a) => solve(cli, a),
        Command::Ray(RayCmd::Complete { source, attach, memo_limit }) => ray_complete(cli, source, *attach, *memo_limit),
        Command::Shadow(a) => shadow(cli, a),
        Command::Array(a) => array(cli, a),
        Command::Period(a) => period(cli, a),
        Command::Band(a) => band(a),
        Command::Equiv(a) => equiv(cli, a),
        Command::Dynsys(cmd) => dynsys(cmd),
        Command::Plot(a) => plot(cli, a),
    }
}

fn nim(cli: &Cli, cmd: &NimCmd) -> CmdResult {
    let (key, value) = match cmd {
        NimCmd::Sum { a, b } => ("nim_sum", json!(nim_sum(*a, *b))),
        NimCmd::Outcome { stacks } => ("outcome", json!(nim_outcome(stacks))),
        NimCmd::Misere { stacks } => ("outcome", json!(misere_outcome(stacks))),
    };
    if cli.json {
        emit_json(&json!({ key: value }))?;
    } else {
        match value {
            serde_json::Value::String(s) => println!("{s}"),
            v => println!("{v}"),
        }
    }
    Ok(Verdict::Success)
}

fn load_tree(src: &TreeSource) -> Result<TreePosition, Failure> {
    if let Some(path) = &src.tree {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(usage)?;
        return Ok(TreePosition::from_json_str(&text)?);
    }
    if let Some(t) = &src.tripod {
        if t.len() != 4 {
            return Err(usage(anyhow!("--tripod takes center,a,b,c")));
        }
        return Ok(TreePosition::tripod(t[0], [t[1], t[2], t[3]]));
    }
    if let Some(p) = &src.path {
        return Ok(TreePosition::path(p));
    }
    Err(usage(anyhow!("one of --tree, --tripod or --path is required")))
}

fn solver(limit: Option<usize>) -> TreeSolver {
    limit.map_or_else(TreeSolver::new, TreeSolver::with_limit)
}

fn solve(cli: &Cli, a: &SolveArgs) -> CmdResult {
    let p = load_tree(&a.source)?;
    let mut s = solver(a.memo_limit);
    let outcome = s.classify(&p)?;
    let grundy = s.grundy(&p)?;
    if (grundy == 0) != outcome.is_p() {
        return Err(Failure::Invariant(anyhow!("outcome {outcome} disagrees with grundy value {grundy}")));
    }
    if cli.json {
        emit_json(&json!({
            "outcome": outcome,
            "grundy": grundy,
            "vertices": p.vertex_count(),
            "total_coins": p.total_coins(),
        }))?;
    } else {
        println!("{outcome} {grundy}");
    }
    Ok(Verdict::Success)
}

fn ray_complete(cli: &Cli, src: &TreeSource, attach: u32, limit: Option<usize>) -> CmdResult {
    let ray = Ray::new(load_tree(src)?, attach)?;
    let mut s = solver(limit);
    let completion = ray.p_completion(&mut s)?;
    if cli.json {
        emit_json(&json!({ "attach": attach, "leaf_sum": ray.leaf_sum(), "completion": completion }))?;
    } else {
        println!("{completion}");
    }
    Ok(Verdict::Success)
}

fn shadow(cli: &Cli, a: &ShadowArgs) -> CmdResult {
    let world = match (&a.world, a.tripod_center) {
        (Some(path), _) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(usage)?;
            World::from_json_str(&text)?
        }
        (None, Some(c)) => World::tripod(c),
        (None, None) => return Err(usage(anyhow!("one of --world or --tripod-center is required"))),
    };
    let barrier = BoxBarrier::new(world, a.thresholds.clone())?;
    let map = match a.source {
        ShadowSource::Oracle => shadow_map(&barrier, a.horizon, CompletionSource::Oracle(&mut TreeSolver::new()))?,
        ShadowSource::Array => {
            let center = barrier.world().tripod_center().ok_or(RayError::NotTripodWorld)?;
            let center = u32::try_from(center).map_err(usage)?;
            let reach = barrier.effective_thresholds().iter().max().copied().unwrap_or(0) + a.horizon;
            let dim = usize::try_from(reach).map_err(usage)? * 2 + 16;
            let mut store = ArrayStore::new();
            store.insert(load_array(cli, center, dim, false)?);
            shadow_map(&barrier, a.horizon, CompletionSource::TripodArray(&mut store))?
        }
    };
    if cli.json {
        let rows: Vec<_> =
            map.iter().map(|(k, v)| json!({ "axis": k.axis, "fixed": k.fixed, "shadowed": v })).collect();
        emit_json(&rows)?;
    } else {
        print!("{}", shadow_csv(&map));
    }
    Ok(Verdict::Success)
}

fn cache_path(dir: &Path, center: u32, dim: usize) -> PathBuf {
    dir.join(format!("c{center}-d{dim}-v{TNIM_VERSION}.tnim"))
}

/// `C_center` at exactly `dim`, through the cache when enabled.
fn load_array(cli: &Cli, center: u32, dim: usize, layers: bool) -> Result<CompletionArray, Failure> {
    let build = || if layers { generate_array_by_layers(center, dim) } else { generate_array(center, dim) };
    if !cli.use_cache {
        return Ok(build());
    }
    let path = cache_path(&cli.cache_dir, center, dim);
    if path.exists() {
        match read_tnim(&path) {
            Ok(arr) if arr.center() == center && arr.dim() == dim => return Ok(arr),
            Ok(_) => eprintln!("warning: {} holds a different array, regenerating", path.display()),
            Err(e) => eprintln!("warning: ignoring cache file {}: {e}", path.display()),
        }
    }
    let arr = build();
    fs::create_dir_all(&cli.cache_dir)?;
    write_tnim(&arr, &path).map_err(usage)?;
    Ok(arr)
}

fn array(cli: &Cli, a: &ArrayArgs) -> CmdResult {
    let arr = load_array(cli, a.center, a.dim, a.layers)?;
    arr.check_invariants().map_err(|e| Failure::Invariant(anyhow!(e)))?;
    if a.out == "-" {
        if cli.json {
            let rows: Vec<&[u32]> = (0..arr.dim()).map(|r| arr.row(r)).collect();
            emit_json(&json!({ "center": arr.center(), "dim": arr.dim(), "rows": rows }))?;
        } else {
            print!("{}", to_csv(&arr));
        }
        return Ok(Verdict::Success);
    }
    if a.out.ends_with(".tnim") {
        write_out(&a.out, &encode_tnim(&arr))?;
    } else if a.out.ends_with(".csv") {
        write_out(&a.out, to_csv(&arr).as_bytes())?;
    } else {
        return Err(usage(anyhow!("output must end in .csv or .tnim, or be -")));
    }
    if cli.json {
        emit_json(&json!({ "center": arr.center(), "dim": arr.dim(), "out": a.out }))?;
    } else {
        println!("wrote C_{} ({}x{}) to {}", arr.center(), arr.dim(), arr.dim(), a.out);
    }
    Ok(Verdict::Success)
}

fn mode_name(m: PeriodMode) -> &'static str {
    match m {
        PeriodMode::VerifiedOnWindow => "verified_on_window",
        PeriodMode::HeuristicLastHalf => "heuristic_last_half",
        PeriodMode::NotFound => "not_found",
    }
}

fn print_period(cli: &Cli, r: &PeriodReport) -> Result<(), Failure> {
    if cli.json {
        return emit_json(r);
    }
    match (r.period, r.preperiod) {
        (Some(p), Some(s)) => println!("period {p} preperiod {s} terms {} {}", r.terms_used, mode_name(r.mode)),
        _ => println!("no period within {} terms", r.terms_used),
    }
    Ok(())
}

fn period(cli: &Cli, a: &PeriodArgs) -> CmdResult {
    if let Some(PeriodTable::Table { center, rows, terms }) = &a.table {
        let table = leading_rows(*center, rows.end, *terms);
        let reports: Vec<PeriodReport> = rows
            .clone()
            .into_par_iter()
            .map(|r| {
                let seq: Vec<u64> = table[r].iter().map(|&v| u64::from(v)).collect();
                detect_period(&seq)
            })
            .collect::<Result<_, _>>()
            .map_err(usage)?;
        if cli.json {
            let out: Vec<_> = rows.clone().zip(&reports).map(|(row, r)| json!({ "row": row, "report": r })).collect();
            emit_json(&out)?;
        } else {
            let mut s = String::new();
            for (row, r) in rows.clone().zip(&reports) {
                let p = r.period.map(|p| p.to_string()).unwrap_or_default();
                s.push_str(&format!("{row},{p},{}\n", mode_name(r.mode)));
            }
            print!("{s}");
        }
        return Ok(Verdict::Success);
    }
    let center = a.center.ok_or_else(|| usage(anyhow!("--center is required")))?;
    let row = a.row.ok_or_else(|| usage(anyhow!("--row is required")))?;
    let r = row_period(center, row, a.terms).map_err(usage)?;
    print_period(cli, &r)?;
    Ok(verdict(r.mode != PeriodMode::NotFound))
}

fn band(a: &BandArgs) -> CmdResult {
    let r = band_detect(a.center, a.vmax, a.dim).map_err(usage)?;
    emit_json(&r)?;
    Ok(verdict(r.verified))
}

fn equiv(cli: &Cli, a: &EquivArgs) -> CmdResult {
    let mut store = ArrayStore::new();
    for c in [a.c1, a.c2] {
        store.insert(load_array(cli, c, a.extent + 1, false)?);
    }
    let r = near_equivalence_check(&mut store, a.c1, a.c2, a.threshold, a.extent).map_err(usage)?;
    emit_json(&r)?;
    Ok(verdict(match a.mode {
        EquivMode::Values => r.equal,
        EquivMode::PPositions => r.p_positions_equal,
    }))
}

fn dynsys(cmd: &DynCmd) -> CmdResult {
    match cmd {
        DynCmd::D1 { n, seed, steps } => {
            let mut s = D1Seed::parse(*n, seed)?;
            let mut states = vec![s];
            let mut insertions = Vec::new();
            for _ in 0..*steps {
                insertions.push(s.insertion_position());
                s = s.step();
                states.push(s);
            }
            let energy: Vec<u32> = states.iter().map(D1Seed::energy).collect();
            emit_json(&json!({ "n": n, "states": states, "insertions": insertions, "energy": energy }))?;
            Ok(Verdict::Success)
        }
        DynCmd::Dk { k, n, state, steps } => {
            let text =
                fs::read_to_string(state).with_context(|| format!("reading {}", state.display())).map_err(usage)?;
            let mut s = DkState::parse(*k, *n, &text)?;
            let mut states = vec![s.clone()];
            let mut insertions = Vec::new();
            let mut undefined_at = None;
            for step in 0..*steps {
                match s.insertions() {
                    Ok(ins) => insertions.push(ins),
                    Err(DynError::NoEligibleZero { row }) => {
                        undefined_at = Some(json!({ "step": step, "row": row }));
                        break;
                    }
                    Err(e) => return Err(e.into()),
                }
                s = s.step()?;
                states.push(s.clone());
            }
            let stable = if k % 2 == 0 { s.is_stable().ok() } else { None };
            emit_json(&json!({
                "k": k, "n": n, "states": states, "insertions": insertions,
                "undefined": undefined_at, "final_stable": stable,
            }))?;
            Ok(verdict(undefined_at.is_none()))
        }
        DynCmd::Orbit { n, seed, max_steps } => {
            let s = D1Seed::parse(*n, seed)?;
            let r = find_orbit(&s, *max_steps)?;
            emit_json(&json!({
                "n": n, "seed": s, "simple": s.is_simple(),
                "preperiod": r.preperiod, "period": r.period, "cycle_representative": r.cycle_representative,
            }))?;
            Ok(Verdict::Success)
        }
        DynCmd::SweepD1 { n } => {
            let r = sweep_d1(*n)?;
            emit_json(&r)?;
            Ok(verdict(r.all_divide_2n && r.energy_monotone))
        }
        DynCmd::D3Conjecture { n, exhaustive, samples, rng_seed } => {
            let sampling = match (exhaustive, samples) {
                (true, _) => Sampling::Exhaustive,
                (false, Some(samples)) => Sampling::Random { samples: *samples, rng_seed: *rng_seed },
                (false, None) => return Err(usage(anyhow!("give --exhaustive or --samples"))),
            };
            let r = check_d3_conjecture(*n, sampling)?;
            emit_json(&r)?;
            Ok(verdict(r.all_divide))
        }
        DynCmd::BandInduction { center, kmax, dim } => {
            let entries = check_band_induction(*center, *kmax, *dim)?;
            emit_json(&entries)?;
            let ok = entries.iter().all(|e| e.band_found && e.orbit_stable == Some(true) && e.next_band_found);
            Ok(verdict(ok))
        }
    }
}

fn plot(cli: &Cli, a: &PlotArgs) -> CmdResult {
    let need = |v: Option<u32>, flag: &str| v.ok_or_else(|| usage(anyhow!("--{flag} is required for this plot")));
    let kind = match a.kind {
        PlotKindArg::Compare => PlotKind::Compare { c1: need(a.c1, "c1")?, c2: need(a.c2, "c2")? },
        PlotKindArg::Band => PlotKind::Band { center: need(a.center, "center")?, vmax: need(a.vmax, "vmax")? },
        PlotKindArg::Ppositions => {
            PlotKind::PPositions { center: need(a.center, "center")?, leaf: need(a.leaf, "leaf")? }
        }
    };
    let spec = PlotSpec { kind, rows: a.rows.clone(), cols: a.cols.clone() };
    let dim = spec.required_dim();
    let arrays =
        kind.centers().into_iter().map(|c| load_array(cli, c, dim, false)).collect::<Result<Vec<_>, _>>()?;
    let refs: Vec<&CompletionArray> = arrays.iter().collect();
    let format = match a.format {
        FormatArg::Svg => ImageFormat::Svg,
        FormatArg::Pgm => ImageFormat::Pgm,
    };
    let bytes = emit_plot(&spec, &refs, format).map_err(usage)?;
    write_out(&a.out, &bytes)?;
    if a.out != "-" {
        if cli.json {
            emit_json(&json!({ "out": a.out, "bytes": bytes.len() }))?;
        } else {
            println!("wrote {} bytes to {}", bytes.len(), a.out);
        }
    }
    Ok(Verdict::Success)
}
