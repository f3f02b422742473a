//! Command-line front end of the `lambdet` binary.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::config::RunConfig;
use crate::error::Result;
use crate::ladder::{dressed_states, matching_amplitude, raman_rates, transition_frequency};
use crate::params::{photon_flux_from_dbm, to_ghz, to_mhz, SystemParams};
use crate::protocols::{
    dark_count, detection_run, detection_trajectory, efficiency_map, efficiency_vs_length,
    efficiency_vs_photon_number, full_cycle, reset_map, reset_run, DetectionOutcome, EfficiencyMap, ResetMap,
    ResetOutcome,
};
use crate::render::{heatmap_svg, write_file, Marker, Table};
use crate::response::{calibrate_signal_power, dip_map, find_matching_point, pdiff_spectrum, ReflectionMap};
use crate::sweep::with_workers;

#[derive(Debug, Parser)]
#[command(name = "lambdet", version, about = "Impedance-matched Lambda-system photon detector simulator")]
pub struct Cli {
    /// Configuration file; unset keys keep the bundled device defaults.
    #[arg(long, global = true, env = "LAMBDET_CONFIG")]
    pub config: Option<PathBuf>,
    /// Output directory (overrides `out_dir`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (overrides `workers`).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Exit with status 3 when any point is flagged or failed.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Write the time trace of a single run to this CSV file.
    #[arg(long, global = true)]
    pub trace_out: Option<PathBuf>,
    /// Override one configuration key, e.g. `--set P_d_dBm=-76`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Suppress progress output.
    #[arg(long, short, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MarkArg {
    None,
    Min,
    Max,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dressed energies, transition frequencies and Raman rates over `rabi_grid`.
    Dressed,
    /// Reflection |r| over `reflect_power_grid` x `reflect_freq_grid`.
    ReflectMap,
    /// Two-dip power separation at `P_s`; with `--solve`, the signal power giving `pdiff_target_db`.
    Calibrate {
        #[arg(long)]
        solve: bool,
    },
    /// One detection at the configured operating point.
    Detect,
    /// Detection efficiency over `power_grid` x `freq_grid`.
    DetectMap,
    /// Efficiency versus signal length over `t_s_list`.
    ScanTs,
    /// Efficiency versus mean photon number over `n_s_list`.
    ScanNs,
    /// Dark-count probability at the configured drive.
    Dark,
    /// One reset stage applied to an excited qubit.
    Reset,
    /// Residual excitation over `reset_power_grid` x `reset_freq_grid`.
    ResetMap,
    /// Reset followed by a detection, with cycle timing.
    Cycle {
        /// Evaluate the detection stage only.
        #[arg(long)]
        no_reset: bool,
    },
    /// SVG heatmap of three CSV columns.
    Render {
        csv: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        z: String,
        #[arg(long, value_enum, default_value = "none")]
        mark: MarkArg,
        /// Output file (defaults to the CSV path with an .svg extension).
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Print the effective configuration in canonical form.
    ShowConfig,
}

/// Result of a command: number of flagged or failed points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Summary {
    pub flagged: usize,
}

struct Ctx {
    cfg: RunConfig,
    out: PathBuf,
    quiet: bool,
    trace_out: Option<PathBuf>,
}

impl Ctx {
    fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    fn write(&self, name: &str, contents: &str) -> Result<PathBuf> {
        let p = self.path(name);
        write_file(&p, contents)?;
        Ok(p)
    }

    fn progress(&self, done: usize, total: usize) {
        if !self.quiet {
            eprintln!("[{done}/{total}] points");
        }
    }
}

/// Loads the configuration named by the flags and applies `--set` overrides.
pub fn load_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::defaults(),
    };
    for item in &cli.set {
        let (k, v) = item.split_once('=').ok_or_else(|| crate::config::ConfigError::Syntax {
            line: 0,
            msg: format!("--set expects KEY=VALUE, got `{item}`"),
        })?;
        cfg.set(k, v)?;
    }
    Ok(cfg)
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<Summary> {
    let cfg = load_config(cli)?;
    let workers = cli.workers.unwrap_or_else(|| cfg.workers());
    let ctx = Ctx {
        out: cli.out.clone().unwrap_or_else(|| PathBuf::from(cfg.out_dir())),
        quiet: cli.quiet,
        trace_out: cli.trace_out.clone(),
        cfg,
    };
    with_workers(workers, || dispatch(&ctx, &cli.command))?
}

/// Whether the exit status should signal flagged points.
pub fn strict_failure(cli: &Cli, summary: &Summary) -> bool {
    let strict = cli.strict || load_config(cli).map(|c| c.strict()).unwrap_or(false);
    strict && summary.flagged > 0
}

fn dispatch(ctx: &Ctx, command: &Command) -> Result<Summary> {
    match command {
        Command::Dressed => dressed(ctx),
        Command::ReflectMap => reflect_map(ctx),
        Command::Calibrate { solve } => calibrate(ctx, *solve),
        Command::Detect => detect(ctx),
        Command::DetectMap => detect_map(ctx),
        Command::ScanTs => scan_ts(ctx),
        Command::ScanNs => scan_ns(ctx),
        Command::Dark => dark(ctx),
        Command::Reset => reset(ctx),
        Command::ResetMap => reset_map_cmd(ctx),
        Command::Cycle { no_reset } => cycle(ctx, *no_reset),
        Command::Render { csv, x, y, z, mark, output } => {
            let marker = match mark {
                MarkArg::None => Marker::None,
                MarkArg::Min => Marker::Min,
                MarkArg::Max => Marker::Max,
            };
            let svg = heatmap_svg(&Table::read(csv)?, x, y, z, marker)?;
            let target = output.clone().unwrap_or_else(|| csv.with_extension("svg"));
            write_file(&target, &svg)?;
            println!("wrote {}", target.display());
            Ok(Summary::default())
        }
        Command::ShowConfig => {
            print!("{}", ctx.cfg.to_canonical_string());
            Ok(Summary::default())
        }
    }
}

fn render_beside(csv_path: &Path, csv: &str, x: &str, y: &str, z: &str, marker: Marker) -> Result<()> {
    let svg = heatmap_svg(&Table::parse(csv)?, x, y, z, marker)?;
    write_file(&csv_path.with_extension("svg"), &svg)
}

fn fmt_row(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:.8e}")).collect::<Vec<_>>().join(",")
}

fn dressed(ctx: &Ctx) -> Result<Summary> {
    let p = ctx.cfg.params()?;
    let wd = ctx.cfg.omega_d(&p);
    p.check_nesting(wd)?;
    let mut s = String::from(
        "rabi_MHz,P_d_dBm,E1_MHz,E2_MHz,E3_MHz,E4_MHz,omega13_GHz,omega14_GHz,omega23_GHz,omega24_GHz,\
         k31_MHz,k32_MHz,k41_MHz,k42_MHz\n",
    );
    for rabi in ctx.cfg.grid("rabi_grid") {
        let l = dressed_states(&p, wd, rabi)?;
        let r = raman_rates(&l, &p);
        let mut row = vec![to_mhz(rabi), p.dbm_from_rabi(rabi)];
        row.extend(l.energies.iter().map(|&e| to_mhz(e)));
        for (i, j) in [(1, 3), (1, 4), (2, 3), (2, 4)] {
            row.push(to_ghz(transition_frequency(&l, i, j)?));
        }
        row.extend([r.k31, r.k32, r.k41, r.k42].map(to_mhz));
        s.push_str(&fmt_row(&row));
        s.push('\n');
    }
    let path = ctx.write("dressed.csv", &s)?;
    let m = matching_amplitude(&p, wd)?;
    println!("balanced drive: rabi/2pi = {:.4} MHz at {:.3} dBm", to_mhz(m), p.dbm_from_rabi(m));
    println!("wrote {}", path.display());
    Ok(Summary::default())
}

/// Runs `row(i)` for each power row in order, reporting progress per row.
fn by_rows<T>(ctx: &Ctx, rows: usize, per_row: usize, mut row: impl FnMut(usize) -> Result<Vec<T>>) -> Result<Vec<T>> {
    let mut all = Vec::with_capacity(rows * per_row);
    for i in 0..rows {
        all.extend(row(i)?);
        ctx.progress((i + 1) * per_row, rows * per_row);
    }
    Ok(all)
}

fn reflect_map(ctx: &Ctx) -> Result<Summary> {
    let p = ctx.cfg.params()?;
    let wd = ctx.cfg.omega_d(&p);
    let powers = ctx.cfg.grid("reflect_power_grid");
    let freqs = ctx.cfg.grid("reflect_freq_grid");
    let amp = ctx.cfg.probe_amp();
    let points = by_rows(ctx, powers.len(), freqs.len(), |i| Ok(dip_map(&p, wd, &powers[i..=i], &freqs, amp)?.points))?;
    let map = ReflectionMap { powers_dbm: powers, freqs, omega_d: wd, probe_amp: amp, params: p, points };
    let csv = map.to_csv();
    let path = ctx.write("reflect_map.csv", &csv)?;
    render_beside(&path, &csv, "omega_s_GHz", "P_d_dBm", "abs_r_dB", Marker::Min)?;
    let m = find_matching_point(&map)?;
    println!(
        "|r| minimum {:.2} dB at {:.3} dBm, {:.5} GHz{}",
        20.0 * m.min_abs_r.log10(),
        m.p_dbm,
        to_ghz(m.omega_s),
        if m.on_boundary { " (grid edge)" } else { "" }
    );
    println!("wrote {}", path.display());
    Ok(Summary { flagged: map.failures() })
}

fn calibrate(ctx: &Ctx, solve: bool) -> Result<Summary> {
    let p = ctx.cfg.pdiff_params()?;
    let wd = ctx.cfg.pdiff_omega_d(&p);
    let scan = ctx.cfg.pdiff_scan();
    let nominal = ctx.cfg.number("P_s");
    let target = ctx.cfg.number("pdiff_target_db");
    let (signal, res) = if solve {
        let c = calibrate_signal_power(&p, wd, target, ctx.cfg.number("P_s_lo"), ctx.cfg.number("P_s_hi"), scan)?;
        (c.signal_dbm, c.result)
    } else {
        (nominal, pdiff_spectrum(&p, wd, photon_flux_from_dbm(nominal, p.omega_r), scan)?)
    };
    let residual = res.p_diff_db - target;
    let mut s = String::from(
        "signal_dBm,signal_offset_dB,P_dip3_dBm,P_dip4_dBm,omega_dip3_GHz,omega_dip4_GHz,P_diff_dB,residual_dB\n",
    );
    s.push_str(&fmt_row(&[
        signal,
        signal - nominal,
        res.p_dip3_dbm,
        res.p_dip4_dbm,
        to_ghz(res.omega_dip3),
        to_ghz(res.omega_dip4),
        res.p_diff_db,
        residual,
    ]));
    s.push('\n');
    let path = ctx.write("calibrate.csv", &s)?;
    println!(
        "signal {:.3} dBm (offset {:+.3} dB): dips at {:.3} / {:.3} dBm, separation {:.3} dB (residual {:+.3} dB)",
        signal,
        signal - nominal,
        res.p_dip3_dbm,
        res.p_dip4_dbm,
        res.p_diff_db,
        residual
    );
    println!("wrote {}", path.display());
    Ok(Summary::default())
}

fn detect(ctx: &Ctx) -> Result<Summary> {
    let p = ctx.cfg.params()?;
    let d = ctx.cfg.detection(&p);
    let settings = ctx.cfg.settings();
    let o = detection_run(&p, d.op, d.t_s, d.n_s, &ctx.cfg.readout(), &settings)?;
    let path = ctx.write("detect.csv", &format!("{}\n{}\n", DetectionOutcome::CSV_HEADER, o.csv_row(&p)))?;
    if let Some(trace) = &ctx.trace_out {
        let traj = detection_trajectory(&p, d.op, d.t_s, d.n_s, &settings)?;
        write_file(trace, &traj.to_csv())?;
    }
    println!(
        "P_e = {:.5}, P_dark = {:.5}, eta = {}",
        o.p_e,
        o.p_dark,
        o.eta.map_or("n/a".into(), |e| format!("{e:.4}"))
    );
    println!("wrote {}", path.display());
    Ok(Summary { flagged: o.health.flagged() as usize })
}

fn detect_map(ctx: &Ctx) -> Result<Summary> {
    let p = ctx.cfg.params()?;
    let wd = ctx.cfg.omega_d(&p);
    let d = ctx.cfg.detection(&p);
    let settings = ctx.cfg.settings();
    let readout = ctx.cfg.readout();
    let powers = ctx.cfg.grid("power_grid");
    let freqs = ctx.cfg.grid("freq_grid");
    let points = by_rows(ctx, powers.len(), freqs.len(), |i| {
        Ok(efficiency_map(&p, wd, &powers[i..=i], &freqs, d.t_s, d.n_s, &readout, &settings)?.points)
    })?;
    let map = EfficiencyMap { powers_dbm: powers, freqs, t_s: d.t_s, n_s: d.n_s, points };
    let csv = map.to_csv(&p);
    let path = ctx.write("detect_map.csv", &csv)?;
    render_beside(&path, &csv, "omega_s_GHz", "P_d_dBm", "eta", Marker::Max)?;
    if let Ok(m) = map.argmax() {
        println!("eta maximum {:.4} at {:.3} dBm, {:.5} GHz", m.value, m.x_row, to_ghz(m.x_col));
    }
    if let Ok(Some(b)) = map.band() {
        println!(
            "eta > 0.5 band at {:.3} dBm: {:.2} MHz{}",
            b.p_dbm,
            to_mhz(b.width()),
            if b.open { " (reaches grid edge)" } else { "" }
        );
    }
    println!("wrote {}", path.display());
    Ok(Summary { flagged: map.flagged() })
}

fn outcome_table(p: &SystemParams, outcomes: &[Result<DetectionOutcome>]) -> (String, usize) {
    let mut s = format!("{}\n", DetectionOutcome::CSV_HEADER);
    let mut flagged = 0;
    for o in outcomes {
        match o {
            Ok(o) => {
                flagged += o.health.flagged() as usize;
                s.push_str(&o.csv_row(p));
                s.push('\n');
            }
            Err(e) => {
                flagged += 1;
                eprintln!("point failed: {e}");
            }
        }
    }
    (s, flagged)
}

fn scan_ts(ctx: &Ctx) -> Result<Summary> {
    let p = ctx.cfg.params()?;
    let d = ctx.cfg.detection(&p);
    let list = ctx.cfg.grid("t_s_list");
    let out = efficiency_vs_length(&p, d.op, &list, d.n_s, &ctx.cfg.readout(), &ctx.cfg.settings());
    ctx.progress(list.len(), list.len());
    let (csv, flagged) = outcome_table(&p, &out);
    let path = ctx.write("scan_ts.csv", &csv)?;
    for o in out.iter().flatten() {
        println!("t_s = {:6.1} ns: eta = {:.4}", o.t_s * 1e9, o.eta.unwrap_or(f64::NAN));
    }
    println!("wrote {}", path.display());
    Ok(Summary { flagged })
}

fn scan_ns(ctx: &Ctx) -> Result<Summary> {
    let p = ctx.cfg.params()?;
    let d = ctx.cfg.detection(&p);
    let list = ctx.cfg.grid("n_s_list");
    let out = efficiency_vs_photon_number(&p, d.op, d.t_s, &list, &ctx.cfg.readout(), &ctx.cfg.settings())?;
    ctx.progress(list.len(), list.len());
    let (csv, flagged) = outcome_table(&p, &out);
    let path = ctx.write("scan_ns.csv", &csv)?;
    for o in out.iter().flatten() {
        println!("n_s = {:6.3}: eta = {:.4}", o.n_s, o.eta.unwrap_or(f64::NAN));
    }
    println!("wrote {}", path.display());
    Ok(Summary { flagged })
}

fn dark(ctx: &Ctx) -> Result<Summary> {
    let p = ctx.cfg.params()?;
    let d = ctx.cfg.detection(&p);
    let pd = dark_count(&p, d.op, d.t_s, &ctx.cfg.settings())?;
    let path = ctx.write(
        "dark.csv",
        &format!("P_d_dBm,t_s_ns,P_dark\n{}\n", fmt_row(&[p.dbm_from_rabi(d.op.rabi), d.t_s * 1e9, pd])),
    )?;
    println!("P_dark = {pd:.5}");
    println!("wrote {}", path.display());
    Ok(Summary::default())
}

fn reset(ctx: &Ctx) -> Result<Summary> {
    let p = ctx.cfg.params()?;
    let o = reset_run(&p, &ctx.cfg.reset(&p), &ctx.cfg.settings())?;
    let path = ctx.write("reset.csv", &format!("{}\n{}\n", ResetOutcome::CSV_HEADER, o.csv_row(&p)))?;
    println!("P_e after reset = {:.5} (without reset pulse {:.5})", o.p_e_after_reset, o.p_e_no_reset);
    println!("wrote {}", path.display());
    Ok(Summary { flagged: o.health.flagged() as usize })
}

fn reset_map_cmd(ctx: &Ctx) -> Result<Summary> {
    let p = ctx.cfg.params()?;
    let template = ctx.cfg.reset(&p);
    let settings = ctx.cfg.settings();
    let powers = ctx.cfg.grid("reset_power_grid");
    let freqs = ctx.cfg.grid("reset_freq_grid");
    let points = by_rows(ctx, powers.len(), freqs.len(), |i| {
        Ok(reset_map(&p, &template, &powers[i..=i], &freqs, &settings)?.points)
    })?;
    let map = ResetMap { powers_dbm: powers, freqs, points };
    let csv = map.to_csv(&p);
    let path = ctx.write("reset_map.csv", &csv)?;
    render_beside(&path, &csv, "omega_rst_GHz", "P_dr_dBm", "P_e_after_reset", Marker::Min)?;
    if let Ok(m) = map.argmin() {
        println!("P_e minimum {:.5} at {:.3} dBm, {:.5} GHz", m.value, m.x_row, to_ghz(m.x_col));
    }
    println!("wrote {}", path.display());
    Ok(Summary { flagged: map.flagged() })
}

fn cycle(ctx: &Ctx, no_reset: bool) -> Result<Summary> {
    let p = ctx.cfg.params()?;
    let d = ctx.cfg.detection(&p);
    let r = ctx.cfg.reset(&p);
    let o = full_cycle(&p, &d, (!no_reset).then_some(&r), &ctx.cfg.settings())?;
    let nan = f64::NAN;
    let path = ctx.write(
        "cycle.csv",
        &format!(
            "period_ns,rate_MHz,eta_fresh,eta_after_reset,P_e_after_reset,P_dark_after_reset,flagged\n{},{}\n",
            fmt_row(&[
                o.period() * 1e9,
                o.rate() * 1e-6,
                o.eta_fresh,
                o.eta_after_reset.unwrap_or(nan),
                o.p_e_after_reset.unwrap_or(nan),
                o.p_dark_after_reset.unwrap_or(nan),
            ]),
            o.health.flagged() as u8
        ),
    )?;
    println!("period {:.1} ns ({:.3} MHz)", o.period() * 1e9, o.rate() * 1e-6);
    println!("eta fresh {:.4}", o.eta_fresh);
    if let Some(e) = o.eta_after_reset {
        println!("eta after reset {e:.4}");
    }
    println!("wrote {}", path.display());
    Ok(Summary { flagged: o.health.flagged() as usize })
}
