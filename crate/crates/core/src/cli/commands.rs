use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use super::*;
use crate::engine::{generate_set, EngineError, GameRecord, SearchConfig, SetOptions};
use crate::notation::csv::{fmt_f64, write_csv_report, CsvReport};
use crate::notation::{parse_fen_for, read_game_records, serialize_fen, serialize_lan, write_game_records, NotationError};
use crate::rules::{perft, perft_divide, Outcome, Position};
use crate::stats::{self, ChessProcess, ChessReference, OptimizerConfig, PositionFilter, SampleMode, StatsError};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Arguments that parse but make no sense together.
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Input { path: PathBuf, source: NotationError },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("{0}")]
    Invalid(String),
}

type Result<T> = std::result::Result<T, CliError>;

pub(super) fn dispatch(cmd: &Command, argv: &[String]) -> Result<()> {
    match cmd {
        Command::Perft(a) => cmd_perft(a),
        Command::Selfplay(a) => cmd_selfplay(a, argv),
        Command::Replay(a) => cmd_replay(a),
        Command::Outcomes(a) => cmd_outcomes(a, argv),
        Command::Diversity(a) => cmd_diversity(a, argv),
        Command::Kl(a) => cmd_kl(a, argv),
        Command::Candidates(a) => cmd_candidates(a, argv),
        Command::PieceValues(a) => cmd_piece_values(a, argv),
        Command::Utilization(a) => cmd_utilization(a, argv),
        Command::Lengths(a) => cmd_lengths(a, argv),
        Command::OpeningEval(a) => cmd_opening_eval(a, argv),
    }
}

/// Output directory plus the manifest written when the command finishes.
struct Outputs {
    dir: PathBuf,
    files: Vec<String>,
}

impl Outputs {
    fn open(args: &OutputArgs) -> Result<Outputs> {
        fs::create_dir_all(&args.out).map_err(|source| CliError::Io {
            path: args.out.clone(),
            source,
        })?;
        Ok(Outputs {
            dir: args.out.clone(),
            files: Vec::new(),
        })
    }

    fn write_with(&mut self, name: &str, body: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<()> {
        let path = self.dir.join(name);
        let io_err = |source| CliError::Io {
            path: path.clone(),
            source,
        };
        let file = File::create(&path).map_err(io_err)?;
        let mut w = BufWriter::new(file);
        body(&mut w).map_err(io_err)?;
        w.flush().map_err(io_err)?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn csv(&mut self, name: &str, report: &CsvReport) -> Result<()> {
        self.write_with(name, |w| {
            write_csv_report(&mut &mut *w, report).map_err(|e| match e {
                NotationError::Io(e) => e,
                other => io::Error::other(other.to_string()),
            })
        })
    }

    fn json(&mut self, name: &str, value: &impl Serialize) -> Result<()> {
        self.write_with(name, |w| {
            serde_json::to_writer_pretty(&mut *w, value)?;
            w.write_all(b"\n")
        })
    }

    fn finish(mut self, command: &str, argv: &[String], config: Value) -> Result<()> {
        let manifest = json!({
            "tool": "variant-lab",
            "version": crate::VERSION,
            "command": command,
            "argv": argv.iter().skip(1).collect::<Vec<_>>(),
            "config": config,
            "outputs": self.files,
        });
        self.json("manifest.json", &manifest)?;
        for f in &self.files {
            println!("{}", self.dir.join(f).display());
        }
        Ok(())
    }
}

fn load_games(paths: &[PathBuf]) -> Result<Vec<GameRecord>> {
    let mut all = Vec::new();
    for path in paths {
        let file = File::open(path).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        let games = read_game_records(BufReader::new(file)).map_err(|source| CliError::Input {
            path: path.clone(),
            source,
        })?;
        all.extend(games);
    }
    Ok(all)
}

/// Non-empty, non-comment lines of an opening file, each checked as a FEN of `variant`.
fn load_fens(path: &Path, variant: Variant) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut out = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let p = parse_fen_for(line, variant).map_err(|source| CliError::Input {
            path: path.to_path_buf(),
            source,
        })?;
        out.push(serialize_fen(&p));
    }
    if out.is_empty() {
        return Err(CliError::Invalid(format!("{}: no FEN lines", path.display())));
    }
    Ok(out)
}

fn search_config(s: &SearchArgs) -> SearchConfig {
    SearchConfig {
        simulations: s.sims,
        c_puct: s.cpuct,
        root_noise_alpha: s.noise_alpha,
        root_noise_weight: s.noise_weight,
        softmax_plies: s.softmax_plies,
        max_game_plies: s.max_plies,
        seed: s.seed,
    }
}

fn search_json(s: &SearchArgs) -> Value {
    json!({
        "search": search_config(s),
        "prior": s.prior,
        "threads": s.threads,
        "record_plies": s.record_plies,
    })
}

/// Runs a set with stderr progress at every tenth of the work.
fn run_set(variant: Variant, s: &SearchArgs, count: usize, fens: Vec<String>) -> Result<Vec<GameRecord>> {
    let opts = SetOptions {
        opening_fens: fens,
        threads: s.threads,
        record_plies: s.record_plies,
    };
    let step = (count / 10).max(1);
    let report = |done: usize, total: usize| {
        if done % step == 0 || done == total {
            eprintln!("[{}] {done}/{total} games", variant.id());
        }
    };
    let progress: Option<&(dyn Fn(usize, usize) + Sync)> = if s.quiet { None } else { Some(&report) };
    Ok(generate_set(variant, &s.prior, &search_config(s), count, &opts, progress)?)
}

fn count_arg(n: u64, flag: &str) -> Result<usize> {
    usize::try_from(n).map_err(|_| CliError::Usage(format!("{flag} is too large")))
}

fn cmd_perft(a: &PerftArgs) -> Result<()> {
    let p = match &a.fen {
        Some(fen) => parse_fen_for(fen, a.variant).map_err(|e| CliError::Invalid(format!("--fen: {e}")))?,
        None => Position::initial(a.variant),
    };
    if a.divide && a.depth > 0 {
        for (m, n) in perft_divide(&p, a.depth) {
            println!("{} {n}", serialize_lan(&m));
        }
    }
    println!("{}", perft(&p, a.depth));
    Ok(())
}

fn cmd_selfplay(a: &SelfplayArgs, argv: &[String]) -> Result<()> {
    let mut fens = Vec::new();
    for path in &a.fens {
        fens.extend(load_fens(path, a.variant)?);
    }
    let games = run_set(a.variant, &a.search, count_arg(a.games, "--games")?, fens.clone())?;
    let mut out = Outputs::open(&a.output)?;
    out.write_with("games.jsonl", |w| {
        write_game_records(&mut &mut *w, &games).map_err(|e| io::Error::other(e.to_string()))
    })?;
    let mut config = search_json(&a.search);
    config["variant"] = json!(a.variant.id());
    config["games"] = json!(a.games);
    config["opening_fens"] = json!(fens);
    out.finish("selfplay", argv, config)
}

fn cmd_replay(a: &ReplayArgs) -> Result<()> {
    let mut total = 0usize;
    let mut bad = 0usize;
    for path in &a.games {
        let games = load_games(std::slice::from_ref(path))?;
        for (i, g) in games.iter().enumerate() {
            if let Err(e) = g.validate() {
                eprintln!("{}: game {}: {e}", path.display(), i + 1);
                bad += 1;
            }
        }
        total += games.len();
    }
    println!("{} of {total} games valid", total - bad);
    if bad > 0 {
        return Err(CliError::Invalid(format!("{bad} invalid games")));
    }
    Ok(())
}

fn counts_row(name: &str, c: &stats::OutcomeCounts) -> Result<Vec<String>> {
    let post = c.posterior().mean();
    Ok(vec![
        name.to_string(),
        c.total().to_string(),
        c.n_win.to_string(),
        c.n_draw.to_string(),
        c.n_lose.to_string(),
        fmt_f64(stats::empirical_expected_score(c)?),
        fmt_f64(post[0]),
        fmt_f64(post[1]),
        fmt_f64(post[2]),
        fmt_f64(stats::outcomes::expected_score(&post)),
    ])
}

fn cmd_outcomes(a: &OutcomesArgs, argv: &[String]) -> Result<()> {
    let set_a = load_games(std::slice::from_ref(&a.a))?;
    let set_b = load_games(std::slice::from_ref(&a.b))?;
    let ca = stats::count_outcomes(&set_a)?;
    let cb = stats::count_outcomes(&set_b)?;

    let mut sets = CsvReport::new(
        "outcome_sets",
        1,
        &[
            "set",
            "games",
            "white_wins",
            "draws",
            "black_wins",
            "empirical_score",
            "posterior_win",
            "posterior_draw",
            "posterior_loss",
            "posterior_score",
        ],
    );
    sets.push(counts_row("a", &ca)?);
    sets.push(counts_row("b", &cb)?);

    let mut cmp = CsvReport::new("outcome_comparisons", 1, &["event", "probability", "std_error", "samples"]);
    let rows = [
        ("draw_a_lt_draw_b", stats::draw_rate_comparison(&ca, &cb, a.samples, a.seed)?),
        ("draw_b_lt_draw_a", stats::draw_rate_comparison(&cb, &ca, a.samples, a.seed)?),
        ("score_a_gt_score_b", stats::expected_score_comparison(&ca, &cb, a.samples, a.seed)?),
        ("score_b_gt_score_a", stats::expected_score_comparison(&cb, &ca, a.samples, a.seed)?),
    ];
    for (event, c) in rows {
        cmp.push(vec![event.into(), fmt_f64(c.probability), fmt_f64(c.std_error), c.samples.to_string()]);
    }

    let mut out = Outputs::open(&a.output)?;
    out.csv("outcomes.csv", &sets)?;
    out.csv("comparisons.csv", &cmp)?;
    let config = json!({
        "a": a.a, "b": a.b, "samples": a.samples, "seed": a.seed,
    });
    out.finish("outcomes", argv, config)
}

fn tree_json(t: &TreeArgs) -> Value {
    json!({ "plies": t.plies, "samples": t.samples, "seed": t.seed, "exact": t.exact })
}

fn cmd_diversity(a: &DiversityArgs, argv: &[String]) -> Result<()> {
    let process = ChessProcess::new(a.variant, &a.prior);
    let curve = if a.tree.exact {
        stats::exact_diversity(&process, a.tree.plies)
    } else {
        stats::diversity_curve(&process, a.tree.plies, a.tree.samples, a.tree.seed)?
    };
    let mut report = CsvReport::new(
        "diversity",
        1,
        &["ply", "samples", "entropy", "entropy_se", "candidates", "candidates_se", "branching", "sqrt_ratio"],
    );
    for (s, r) in curve.plies.iter().zip(curve.sqrt_ratio()) {
        report.push(vec![
            s.ply.to_string(),
            s.samples.to_string(),
            fmt_f64(s.entropy),
            fmt_f64(s.entropy_se),
            fmt_f64(s.candidates),
            fmt_f64(s.candidates_se),
            fmt_f64(s.branching),
            fmt_f64(r),
        ]);
    }
    let mut out = Outputs::open(&a.output)?;
    out.csv("diversity.csv", &report)?;
    let mut config = tree_json(&a.tree);
    config["variant"] = json!(a.variant.id());
    config["prior"] = json!(a.prior);
    out.finish("diversity", argv, config)
}

fn pair_json(p: &PairArgs) -> Value {
    json!({
        "p_variant": p.p_variant.id(),
        "q_variant": p.q_variant.id(),
        "p_prior": p.p_prior,
        "q_prior": p.q_prior,
    })
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Some(b), Value::Object(e)) = (base.as_object_mut(), extra) {
        b.extend(e);
    }
    base
}

fn cmd_kl(a: &KlArgs, argv: &[String]) -> Result<()> {
    let process = ChessProcess::new(a.pair.p_variant, &a.pair.p_prior);
    let reference = ChessReference {
        variant: a.pair.q_variant,
        prior: &a.pair.q_prior,
    };
    let est = if a.tree.exact {
        stats::exact_kl(&process, &reference, a.tree.plies)
    } else {
        stats::kl_divergence(&process, &reference, a.tree.plies, a.tree.samples, a.tree.seed)
    };
    let mut per_ply = CsvReport::new("kl", 1, &["ply", "nats", "std_error", "reached"]);
    // Missing support makes the divergence infinite: a result, not a failure.
    let summary = match est {
        Ok(e) => {
            for &(t, v, se, n) in &e.per_ply {
                per_ply.push(vec![t.to_string(), fmt_f64(v), fmt_f64(se), n.to_string()]);
            }
            println!("KL = {} nats (se {})", fmt_f64(e.nats), fmt_f64(e.std_error));
            json!({ "finite": true, "nats": e.nats, "std_error": e.std_error, "samples": e.samples })
        }
        Err(StatsError::SupportViolation { state, action }) => {
            println!("KL = inf: {action} at {state} has no reference support");
            json!({ "finite": false, "nats": null, "state": state, "move": action })
        }
        Err(e) => return Err(e.into()),
    };
    let mut out = Outputs::open(&a.output)?;
    out.csv("kl.csv", &per_ply)?;
    out.json("kl_summary.json", &summary)?;
    out.finish("kl", argv, merge(pair_json(&a.pair), tree_json(&a.tree)))
}

fn cmd_candidates(a: &CandidatesArgs, argv: &[String]) -> Result<()> {
    let process = ChessProcess::new(a.pair.p_variant, &a.pair.p_prior);
    let reference = ChessReference {
        variant: a.pair.q_variant,
        prior: &a.pair.q_prior,
    };
    let curve = stats::additional_candidates(&process, &reference, a.plies, a.samples, a.seed)?;
    let mut report = CsvReport::new("candidates", 1, &["ply", "additional", "std_error", "states"]);
    for &(t, v, se, n) in &curve.per_ply {
        report.push(vec![t.to_string(), fmt_f64(v), fmt_f64(se), n.to_string()]);
    }
    let summary = json!({
        "states_checked": curve.states_checked,
        "bound_violations": curve.violations,
        "max_excess": curve.max_excess,
        "sequences": curve.sequences,
    });
    let mut out = Outputs::open(&a.output)?;
    out.csv("candidates.csv", &report)?;
    out.json("candidates_summary.json", &summary)?;
    let config = merge(
        pair_json(&a.pair),
        json!({ "plies": a.plies, "samples": a.samples, "seed": a.seed }),
    );
    out.finish("candidates", argv, config)
}

fn cmd_piece_values(a: &PieceValuesArgs, argv: &[String]) -> Result<()> {
    let games = load_games(&a.games)?;
    let filter = PositionFilter {
        min_ply: a.min_ply,
        mode: if a.one_per_game {
            SampleMode::OnePerGame { seed: a.seed }
        } else {
            SampleMode::AllPositions
        },
    };
    let opt = OptimizerConfig {
        max_iterations: a.max_iterations,
        ..OptimizerConfig::default()
    };
    let model = stats::fit_piece_values(&games, &filter, &opt)?;
    let mut report = CsvReport::new("piece_values", 1, &["piece", "weight", "per_pawn"]);
    let names = ["bias", "pawn", "knight", "bishop", "rook", "queen"];
    for (i, name) in names.iter().enumerate() {
        let per_pawn = match i {
            0 => String::new(),
            1 => fmt_f64(1.0),
            _ => fmt_f64(model.normalized[i - 2]),
        };
        report.push(vec![name.to_string(), fmt_f64(model.weights[i]), per_pawn]);
    }
    let mut out = Outputs::open(&a.output)?;
    out.csv("piece_values.csv", &report)?;
    out.json("piece_values_model.json", &model)?;
    let config = json!({
        "games": a.games, "filter": filter, "optimizer": opt,
    });
    out.finish("piece-values", argv, config)
}

fn cmd_utilization(a: &GamesInput, argv: &[String]) -> Result<()> {
    let games = load_games(&a.games)?;
    let rep = stats::special_move_utilization(&games)?;
    let errors = rep.consistency_errors();
    if !errors.is_empty() {
        return Err(CliError::Invalid(errors.join("; ")));
    }
    let mut report = CsvReport::new(
        "utilization",
        1,
        &["move_type", "games", "plies", "games_with", "plies_with", "game_fraction", "move_fraction"],
    );
    for f in &rep.flags {
        report.push(vec![
            f.kind.name().to_string(),
            rep.games.to_string(),
            rep.plies.to_string(),
            f.games_with.to_string(),
            f.plies_with.to_string(),
            fmt_f64(f.game_fraction),
            fmt_f64(f.move_fraction),
        ]);
    }
    let mut out = Outputs::open(&a.output)?;
    out.csv("utilization.csv", &report)?;
    out.json("utilization_summary.json", &rep)?;
    out.finish("utilization", argv, json!({ "games": a.games }))
}

fn cmd_lengths(a: &LengthsArgs, argv: &[String]) -> Result<()> {
    let games = load_games(&a.games)?;
    let hist = stats::game_length_histogram(&games, count_arg(a.width, "--width")?)?;
    let mut report = CsvReport::new("lengths", 1, &["bucket_start", "bucket_end", "games", "decisive"]);
    for (i, (all, dec)) in hist.all.iter().zip(&hist.decisive).enumerate() {
        let start = hist.bucket_start(i);
        report.push(vec![
            start.to_string(),
            (start + hist.width).to_string(),
            all.to_string(),
            dec.to_string(),
        ]);
    }
    let mut out = Outputs::open(&a.output)?;
    out.csv("lengths.csv", &report)?;
    out.finish("lengths", argv, json!({ "games": a.games, "width": a.width }))
}

fn cmd_opening_eval(a: &OpeningEvalArgs, argv: &[String]) -> Result<()> {
    // (name, fen); a file with several lines yields `stem-1`, `stem-2`, ...
    let mut openings = Vec::new();
    for path in &a.fens {
        let stem = path.file_stem().map_or("opening".into(), |s| s.to_string_lossy().into_owned());
        let fens = load_fens(path, a.variant)?;
        let single = fens.len() == 1;
        for (i, fen) in fens.into_iter().enumerate() {
            let name = if single { stem.clone() } else { format!("{stem}-{}", i + 1) };
            openings.push((name, fen));
        }
    }
    let per = count_arg(a.games, "--games")?;
    let total = per
        .checked_mul(openings.len())
        .ok_or_else(|| CliError::Usage("--games times openings overflows".into()))?;
    let fens: Vec<String> = openings.iter().map(|(_, f)| f.clone()).collect();
    // Game i starts from opening i mod k, so each opening gets exactly `per` games.
    let games = run_set(a.variant, &a.search, total, fens)?;

    let mut report = CsvReport::new(
        "opening_eval",
        1,
        &["opening", "fen", "games", "white_wins", "draws", "black_wins", "win_rate", "draw_rate", "loss_rate", "white_score"],
    );
    for (k, (name, fen)) in openings.iter().enumerate() {
        let (mut w, mut d, mut l) = (0u64, 0u64, 0u64);
        for g in games.iter().skip(k).step_by(openings.len()) {
            match g.result.state {
                Outcome::WhiteWins => w += 1,
                Outcome::BlackWins => l += 1,
                Outcome::Draw | Outcome::Ongoing => d += 1,
            }
        }
        let n = (w + d + l) as f64;
        report.push(vec![
            name.clone(),
            fen.clone(),
            (w + d + l).to_string(),
            w.to_string(),
            d.to_string(),
            l.to_string(),
            fmt_f64(w as f64 / n),
            fmt_f64(d as f64 / n),
            fmt_f64(l as f64 / n),
            fmt_f64((w as f64 + 0.5 * d as f64) / n),
        ]);
    }
    let mut out = Outputs::open(&a.output)?;
    out.write_with("games.jsonl", |w| {
        write_game_records(&mut &mut *w, &games).map_err(|e| io::Error::other(e.to_string()))
    })?;
    out.csv("opening_eval.csv", &report)?;
    let mut config = search_json(&a.search);
    config["variant"] = json!(a.variant.id());
    config["games_per_opening"] = json!(a.games);
    config["openings"] = json!(openings);
    out.finish("opening-eval", argv, config)
}
