//! Command-line front end.
//!
//! Every subcommand writes plain text (CSV or `key = value` lines) to
//! stdout or `--out`, preceded by a `# constants: <source>` line. Exit
//! codes: 0 on success, 1 on domain or I/O errors, 2 on usage errors.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::constants::{derive_constants, planck_units, planck_units_from_ab, ConstantsSource, PhysicalConstants};
use crate::counting;
use crate::error::{Error, Result};
use crate::fit::{self, FitOptions};
use crate::integrals;
use crate::sim::{self, SimConfig};
use crate::spectral::{self, Law, SpectralParams};
use crate::table::{format_sci, NumericTable, SpectrumTable};
use crate::thermo;

/// Avogadro's number as obtained by Einstein from radiation data (1905).
pub const HISTORICAL_AVOGADRO: f64 = 6.17e23;

#[derive(Debug, Parser)]
#[command(name = "planck", version, about = "Blackbody radiation, oscillator entropy and constants from spectra")]
pub struct Cli {
    /// Constants file (`key = value` lines); bundled defaults when omitted.
    #[arg(long, global = true)]
    pub constants: Option<PathBuf>,
    /// Seed for every random stream.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate the radiation laws on a geometric frequency grid.
    Spectrum(SpectrumArgs),
    /// Walk from entropy to energy to spectral density at one (T, ν).
    Derive(DeriveArgs),
    /// Count microstates W(n, p).
    Count(CountArgs),
    /// Monte Carlo occupancy histogram of one oscillator.
    Simulate(SimulateArgs),
    /// Fit (a, b) to a spectrum CSV and derive N and e.
    Fit(FitArgs),
    /// Natural (Planck) units.
    Units(UnitsArgs),
    /// Stefan-Boltzmann integrals and the Rayleigh-Jeans divergence.
    Sigma(SigmaArgs),
    /// Frequency of maximal spectral energy density.
    Peak(PeakArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LawChoice {
    All,
    Planck,
    Wien,
    RayleighJeans,
    ZeroPoint,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// Temperature, K.
    #[arg(long = "T")]
    pub t: f64,
    /// Lowest frequency, Hz (default: aν/T = 0.01).
    #[arg(long)]
    pub nu_min: Option<f64>,
    /// Highest frequency, Hz (default: aν/T = 20).
    #[arg(long)]
    pub nu_max: Option<f64>,
    #[arg(long, default_value_t = 50)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = LawChoice::All)]
    pub law: LawChoice,
}

#[derive(Debug, Args)]
pub struct DeriveArgs {
    /// Temperature, K.
    #[arg(long = "T")]
    pub t: f64,
    /// Frequency, Hz.
    #[arg(long)]
    pub nu: f64,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    /// Oscillators.
    #[arg(long)]
    pub n: u64,
    /// Quanta.
    #[arg(long)]
    pub p: u64,
    /// Also list every composition (refused above 10⁶).
    #[arg(long)]
    pub enumerate: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    /// Independent random streams run in parallel.
    #[arg(long, default_value_t = 1)]
    pub shards: u32,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Spectrum CSV with header `nu_hz,T_K,u_J_per_m3Hz`.
    pub input: PathBuf,
    /// Starting a, K·s.
    #[arg(long)]
    pub a0: Option<f64>,
    /// Starting b, J·s.
    #[arg(long)]
    pub b0: Option<f64>,
    /// Fit a free amplitude factor; b is then held at --b0 (or h).
    #[arg(long)]
    pub amplitude: bool,
}

#[derive(Debug, Args)]
pub struct UnitsArgs {
    /// Use this a (K·s) instead of h/k.
    #[arg(long, requires = "b")]
    pub a: Option<f64>,
    /// Use this b (J·s) instead of h.
    #[arg(long, requires = "a")]
    pub b: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SigmaArgs {
    /// Temperature for the energy-density totals, K.
    #[arg(long = "T", default_value_t = 300.0)]
    pub t: f64,
    /// Base cutoff ν₀ for the Rayleigh-Jeans table, Hz (default: Planck peak).
    #[arg(long)]
    pub cutoff: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PeakArgs {
    /// Temperature, K.
    #[arg(long = "T", default_value_t = 5800.0)]
    pub t: f64,
}

fn flag_positive(flag: &str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidArgument {
            flag: flag.to_string(),
            message: format!("must be positive and finite, got {value}"),
        })
    }
}

/// Regime label for `x = hν/kT`.
pub fn regime_label(x: f64) -> &'static str {
    if x >= 10.0 {
        "wien"
    } else if x <= 0.1 {
        "rayleigh-jeans"
    } else {
        "intermediate"
    }
}

fn kv(out: &mut String, key: &str, value: f64) {
    let _ = writeln!(out, "{key} = {}", format_sci(value));
}

/// Runs a parsed command line and returns its output text.
pub fn run(cli: &Cli) -> Result<String> {
    let (pc, source) = PhysicalConstants::load(cli.constants.as_deref())?;
    let mut out = format!("# constants: {source}\n");
    match &cli.command {
        Command::Spectrum(args) => spectrum(&pc, args, &mut out)?,
        Command::Derive(args) => derive(&pc, args, &mut out)?,
        Command::Count(args) => count(&pc, args, &mut out)?,
        Command::Simulate(args) => simulate(cli.seed, args, &mut out)?,
        Command::Fit(args) => fit_cmd(&pc, args, &mut out)?,
        Command::Units(args) => units(&pc, &source, args, &mut out)?,
        Command::Sigma(args) => sigma(&pc, args, &mut out)?,
        Command::Peak(args) => peak(&pc, args, &mut out)?,
    }
    Ok(out)
}

/// Runs and writes to `--out` or stdout.
pub fn execute(cli: &Cli) -> Result<()> {
    let text = run(cli)?;
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn spectrum(pc: &PhysicalConstants, args: &SpectrumArgs, out: &mut String) -> Result<()> {
    let t = flag_positive("--T", args.t)?;
    let sp = SpectralParams::from_hk(pc.h, pc.k)?;
    let nu_min = flag_positive("--nu-min", args.nu_min.unwrap_or(0.01 * t / sp.a()))?;
    let nu_max = flag_positive("--nu-max", args.nu_max.unwrap_or(20.0 * t / sp.a()))?;
    let grid = fit::geometric_grid(nu_min, nu_max, args.points)?;
    let columns: &[LawChoice] = match args.law {
        LawChoice::All => &[LawChoice::Wien, LawChoice::RayleighJeans, LawChoice::Planck, LawChoice::ZeroPoint],
        LawChoice::Wien => &[LawChoice::Wien],
        LawChoice::RayleighJeans => &[LawChoice::RayleighJeans],
        LawChoice::Planck => &[LawChoice::Planck],
        LawChoice::ZeroPoint => &[LawChoice::ZeroPoint],
    };
    let mut names = vec!["nu_hz".to_string()];
    names.extend(columns.iter().map(|col| {
        match col {
            LawChoice::Wien => "u_wien",
            LawChoice::RayleighJeans => "u_rj",
            LawChoice::Planck => "u_planck",
            LawChoice::ZeroPoint => "u_planck_zeropoint",
            LawChoice::All => unreachable!(),
        }
        .to_string()
    }));
    let mut table = NumericTable::new(names);
    for nu in grid {
        let mut row = vec![nu];
        for col in columns {
            row.push(match col {
                LawChoice::Wien => spectral::wien_u(t, nu, &sp, pc.c)?,
                LawChoice::RayleighJeans => spectral::rayleigh_jeans_u(t, nu, pc.k, pc.c)?,
                LawChoice::Planck => spectral::planck_u(t, nu, &sp, pc.c)?,
                LawChoice::ZeroPoint => spectral::zero_point_variant(t, nu, &sp, pc.c)?,
                LawChoice::All => unreachable!(),
            });
        }
        table.push(row);
    }
    out.push_str(&table.to_csv());
    Ok(())
}

fn derive(pc: &PhysicalConstants, args: &DeriveArgs, out: &mut String) -> Result<()> {
    let t = flag_positive("--T", args.t)?;
    let nu = flag_positive("--nu", args.nu)?;
    let quantum = thermo::EnergyQuantum::for_mode(pc.h, nu)?;
    let eps = quantum.value();
    let x = eps / (pc.k * t);
    let e = thermo::energy_from_temperature(t, nu, pc.h, pc.k)?;
    let s = counting::entropy_per_oscillator(e, eps, pc.k)?;
    let d = thermo::entropy_derivatives(e, quantum, pc.k)?;
    let u_bridge = spectral::bridge_u_from_e(e, nu, pc.c)?;
    let u_planck = spectral::planck_u(t, nu, &SpectralParams::from_hk(pc.h, pc.k)?, pc.c)?;
    kv(out, "T_K", t);
    kv(out, "nu_hz", nu);
    kv(out, "x", x);
    let _ = writeln!(out, "regime = {}", regime_label(x));
    kv(out, "epsilon_J", eps);
    kv(out, "E_J", e);
    kv(out, "E_over_epsilon", e / eps);
    kv(out, "S_J_per_K", s);
    kv(out, "dS_dE_per_K", d.ds_de);
    kv(out, "inverse_T_per_K", 1.0 / t);
    kv(out, "d2S_dE2", d.d2s_de2);
    kv(out, "u_bridge", u_bridge);
    kv(out, "u_planck", u_planck);
    kv(out, "rel_difference", (u_bridge / u_planck - 1.0).abs());
    Ok(())
}

fn count(pc: &PhysicalConstants, args: &CountArgs, out: &mut String) -> Result<()> {
    let c = counting::count_microstates(args.n, args.p)?;
    let _ = writeln!(out, "n = {}", c.n);
    let _ = writeln!(out, "p = {}", c.p);
    match &c.w {
        Some(w) => {
            let _ = writeln!(out, "W = {w}");
        }
        None => {
            let _ = writeln!(out, "W = (not computed exactly; n + p - 1 > {})", counting::EXACT_LIMIT);
        }
    }
    kv(out, "ln_W", c.ln_w);
    kv(out, "S_J_per_K", counting::boltzmann_entropy(c.ln_w, pc.k)?);
    kv(out, "ln_W_per_oscillator", c.ln_w / c.n as f64);
    kv(out, "stirling_limit_per_oscillator", counting::entropy_per_oscillator(c.p as f64, c.n as f64, 1.0)?);
    if args.enumerate {
        out.push_str("composition\n");
        for comp in counting::enumerate_compositions(args.n, args.p)? {
            let parts: Vec<String> = comp.iter().map(u64::to_string).collect();
            let _ = writeln!(out, "{}", parts.join(" "));
        }
    }
    Ok(())
}

fn simulate(seed: u64, args: &SimulateArgs, out: &mut String) -> Result<()> {
    if args.n < 2 {
        return Err(Error::InvalidArgument {
            flag: "--n".to_string(),
            message: "must be at least 2 for an occupancy histogram".to_string(),
        });
    }
    let cfg = SimConfig::new(args.n, args.p, args.samples, seed)?.with_shards(args.shards)?;
    let report = sim::run_simulation(&cfg)?;
    let _ = writeln!(
        out,
        "# n = {}, p = {}, samples = {}, seed = {}, shards = {}",
        cfg.n, cfg.p, cfg.samples, cfg.seed, cfg.shards
    );
    let _ = writeln!(out, "# mean_occupancy = {} (p/n = {})", format_sci(report.mean_occupancy), format_sci(cfg.p as f64 / cfg.n as f64));
    let _ = writeln!(
        out,
        "# entropy/k: empirical = {}, exact marginal = {}, large-n limit = {}",
        format_sci(report.empirical_entropy),
        format_sci(report.exact_entropy.unwrap_or(f64::NAN)),
        format_sci(report.limit_entropy)
    );
    out.push_str(&sim::histogram_csv(&sim::histogram_rows(&report)?));
    Ok(())
}

fn fit_cmd(pc: &PhysicalConstants, args: &FitArgs, out: &mut String) -> Result<()> {
    let table = SpectrumTable::read(&args.input)?;
    let init = match (args.a0, args.b0) {
        (Some(a), Some(b)) => Some(SpectralParams::new(a, b)?),
        (None, None) if args.amplitude => Some(SpectralParams::from_hk(pc.h, pc.k)?),
        (None, None) => None,
        (a, b) => {
            let reference = SpectralParams::from_hk(pc.h, pc.k)?;
            Some(SpectralParams::new(a.unwrap_or(reference.a()), b.unwrap_or(reference.b()))?)
        }
    };
    let options = FitOptions {
        init,
        free_amplitude: args.amplitude,
        ..FitOptions::default()
    };
    let result = fit::fit_ab(&table, pc.c, &options)?;
    let _ = writeln!(out, "rows = {}", table.len());
    kv(out, "a_K_s", result.a);
    kv(out, "b_J_s", result.b);
    if let Some(amp) = result.amplitude {
        kv(out, "amplitude", amp);
    }
    kv(out, "residual_rms", result.residual_rms);
    let _ = writeln!(out, "iterations = {}", result.iterations);
    let _ = writeln!(out, "converged = {}", result.converged);
    let _ = writeln!(out, "misfit = {}", result.misfit);
    let n = fit::avogadro_from_ab(&result, pc.r)?;
    let e = fit::elementary_charge_from_n(n, pc.f)?;
    kv(out, "N_per_mol", n);
    kv(out, "e_C", e);
    kv(out, "N_reference_R_over_k", pc.r / pc.k);
    kv(out, "N_historical", HISTORICAL_AVOGADRO);
    kv(out, "N_rel_difference_to_historical", (n / HISTORICAL_AVOGADRO - 1.0).abs());
    kv(out, "e_historical", fit::elementary_charge_from_n(HISTORICAL_AVOGADRO, pc.f)?);
    let check = fit::check_calibration(&result, pc, 1e-3);
    kv(out, "implied_h", check.h);
    kv(out, "implied_k", check.k);
    let _ = writeln!(out, "consistent_with_reference = {}", check.consistent);
    Ok(())
}

fn units(pc: &PhysicalConstants, _source: &ConstantsSource, args: &UnitsArgs, out: &mut String) -> Result<()> {
    let units = match (args.a, args.b) {
        (Some(a), Some(b)) => {
            let sp = SpectralParams::new(a, b)?;
            let _ = writeln!(out, "# parameterisation: a, b, c, G");
            planck_units_from_ab(sp.a(), sp.b(), pc.c, pc.g)
        }
        _ => {
            let _ = writeln!(out, "# parameterisation: h, c, G, k (h-based, not hbar)");
            planck_units(pc)
        }
    };
    kv(out, "length_m", units.length);
    kv(out, "time_s", units.time);
    kv(out, "mass_kg", units.mass);
    kv(out, "temperature_K", units.temperature);
    let d = derive_constants(pc);
    kv(out, "N_per_mol", d.avogadro);
    kv(out, "e_C", d.elementary_charge);
    Ok(())
}

fn sigma(pc: &PhysicalConstants, args: &SigmaArgs, out: &mut String) -> Result<()> {
    let t = flag_positive("--T", args.t)?;
    let sp = SpectralParams::from_hk(pc.h, pc.k)?;
    let reduced = integrals::reduced_bose_integral();
    kv(out, "bose_integral", reduced.value);
    kv(out, "bose_integral_closed_form", std::f64::consts::PI.powi(4) / 15.0);
    kv(out, "bose_integral_est_error", reduced.est_error);
    let d = derive_constants(pc);
    kv(out, "sigma_u_J_per_m3K4", d.sigma_u);
    kv(out, "sigma_W_per_m2K4", d.sigma_u * pc.c / 4.0);
    let planck = integrals::total_energy_density(t, Law::Planck, &sp, pc.c, None)?;
    kv(out, "T_K", t);
    kv(out, "U_planck_quadrature", planck.result.value);
    kv(out, "U_planck_sigma_T4", d.sigma_u * t.powi(4));
    let wien = integrals::total_energy_density(t, Law::Wien, &sp, pc.c, None)?;
    kv(out, "U_wien_quadrature", wien.result.value);
    kv(out, "U_wien_closed_form", integrals::wien_total_closed_form(t, &sp, pc.c));
    let nu0 = match args.cutoff {
        Some(v) => flag_positive("--cutoff", v)?,
        None => integrals::peak_frequency(t, &sp)?,
    };
    out.push_str("# Rayleigh-Jeans energy density grows without bound with the cutoff\n");
    out.push_str("cutoff_hz,U_rayleigh_jeans,ratio_to_first,U_planck_to_cutoff\n");
    let mut first = None;
    for m in [1.0, 2.0, 4.0, 8.0] {
        let nu_c = m * nu0;
        let rj = integrals::total_energy_density(t, Law::RayleighJeans, &sp, pc.c, Some(nu_c))?;
        let pl = integrals::total_energy_density(t, Law::Planck, &sp, pc.c, Some(nu_c))?;
        let base = *first.get_or_insert(rj.result.value);
        let _ = writeln!(
            out,
            "{},{},{},{}",
            format_sci(nu_c),
            format_sci(rj.result.value),
            format_sci(rj.result.value / base),
            format_sci(pl.result.value)
        );
    }
    Ok(())
}

fn peak(pc: &PhysicalConstants, args: &PeakArgs, out: &mut String) -> Result<()> {
    let t = flag_positive("--T", args.t)?;
    let sp = SpectralParams::from_hk(pc.h, pc.k)?;
    let x = integrals::peak_reduced_frequency();
    kv(out, "x_peak_root", x);
    kv(out, "x_peak_golden", integrals::peak_reduced_frequency_golden());
    kv(out, "residual", integrals::peak_condition(x));
    kv(out, "T_K", t);
    kv(out, "nu_max_hz", integrals::peak_frequency(t, &sp)?);
    kv(out, "nu_max_over_T", integrals::peak_frequency(t, &sp)? / t);
    kv(out, "nu_max_wien_law_hz", integrals::wien_peak_frequency(t, &sp)?);
    Ok(())
}
