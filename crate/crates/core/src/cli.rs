//! Command-line front end shared by the `defectoscope` binary and tests.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::io::{self, GridFormat, SvgPlot};
use crate::jahn_teller::{self as jt, JtJob, JtTargets};
use crate::lineshape::{stokes_shift, total_hr, zpl_weight, LineshapeJob};
use crate::radiative::{radiative_rate, EmitterParams};
use crate::spectrum::{Grid, Spectrum, SpectrumKind, SpectrumMeta};
use crate::spin::OdmrJob;
use crate::verify::{all_passed, Check};
use crate::zfs::{self, SpinLabel, SpinOrbital};

pub const THREADS_ENV: &str = "DEFECTOSCOPE_THREADS";

/// Sticks weaker than this fraction of the strongest are not written.
pub const STICK_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Svg,
    Both,
}

impl OutputFormat {
    fn csv(self) -> bool {
        matches!(self, OutputFormat::Csv | OutputFormat::Both)
    }

    fn svg(self) -> bool {
        matches!(self, OutputFormat::Svg | OutputFormat::Both)
    }
}

/// Parsed command line.
#[derive(Debug, Clone, Parser)]
#[command(name = "defectoscope", version, about = "Spectroscopy numerics for point-defect spins")]
pub struct JobConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Directory for output files (created if missing).
    #[arg(long, global = true, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Both)]
    pub format: OutputFormat,
    /// Run the built-in invariant checks on the inputs as well.
    #[arg(long, global = true)]
    pub verify: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Phonon-sideband lineshape, PL and absorption from a mode table.
    Lineshape(LineshapeArgs),
    /// cw-ODMR spectrum of a spin-system file.
    Odmr(OdmrArgs),
    /// Radiative rate and lifetime from a transition dipole.
    Lifetime(LifetimeArgs),
    /// Dipolar zero-field splitting from orbital grids.
    #[command(subcommand)]
    Zfs(ZfsCommand),
    /// e⊗E Jahn-Teller couplings and Ham reduction factor.
    Jt(JtArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Lineshape(_) => "lineshape",
            Command::Odmr(_) => "odmr",
            Command::Lifetime(_) => "lifetime",
            Command::Zfs(_) => "zfs",
            Command::Jt(_) => "jt",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct LineshapeArgs {
    /// Mode table CSV.
    pub modes: PathBuf,
    #[arg(long)]
    pub zpl_ev: f64,
    /// Temperatures in K; repeat for an overlay.
    #[arg(long = "temperature", short = 'T', default_values_t = [4.0, 300.0])]
    pub temperatures: Vec<f64>,
    /// Lorentzian half-width, meV.
    #[arg(long, default_value_t = crate::lineshape::DEFAULT_GAMMA_MEV)]
    pub gamma_mev: f64,
    /// Gaussian width for the rendered spectral function, meV.
    #[arg(long, default_value_t = crate::lineshape::DEFAULT_SMEARING_MEV)]
    pub smearing_mev: f64,
    /// Sideband-energy grid `min:max:n` in eV.
    #[arg(long, default_value = "-0.2:0.8:4001", allow_hyphen_values = true)]
    pub grid: Grid,
}

#[derive(Debug, Clone, Args)]
pub struct OdmrArgs {
    /// Spin-system TOML file.
    pub system: PathBuf,
    /// Override `section.key=value` (TOML literal), e.g. `sweep.B_mT=[0,0,0]`.
    #[arg(long = "set", value_name = "KEY=VALUE", value_parser = parse_override)]
    pub overrides: Vec<(String, String)>,
}

#[derive(Debug, Clone, Args)]
pub struct LifetimeArgs {
    #[arg(long)]
    pub ezpl_ev: f64,
    #[arg(long)]
    pub dipole_debye: f64,
    /// Refractive index.
    #[arg(long = "n")]
    pub refractive_index: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrbitalKind {
    Gaussian,
    P,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisName {
    X,
    Y,
    Z,
}

#[derive(Debug, Clone, Subcommand)]
pub enum ZfsCommand {
    /// Write a Gaussian or p-like test orbital on a cubic grid.
    Generate {
        #[arg(long, value_enum, default_value_t = OrbitalKind::Gaussian)]
        kind: OrbitalKind,
        /// Cubic cell edge, Å.
        #[arg(long, default_value_t = 16.0)]
        cell: f64,
        /// Points per axis.
        #[arg(long, default_value_t = 64)]
        points: usize,
        /// Centre `x,y,z` in Å.
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
        center: Vector3<f64>,
        /// Width of |ψ|², Å.
        #[arg(long)]
        sigma: f64,
        /// Lobe axis of a p orbital.
        #[arg(long, value_enum, default_value_t = AxisName::Z)]
        axis: AxisName,
        #[arg(long, default_value = "orbital")]
        label: String,
        /// Write the binary format instead of text.
        #[arg(long)]
        binary: bool,
    },
    /// Dipolar tensor of one antisymmetrized same-spin pair.
    Pair {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value_t = zfs::DEFAULT_G)]
        g: f64,
    },
    /// Sum over spin orbitals given as `path:up` or `path:down`.
    Sum {
        #[arg(required = true)]
        orbitals: Vec<String>,
        #[arg(long, default_value_t = 1.0)]
        total_spin: f64,
    },
    /// ½(D_ferro − D_broken) in MHz.
    #[command(allow_negative_numbers = true)]
    Decontaminate { d_ferro_mhz: f64, d_broken_mhz: f64 },
}

#[derive(Debug, Clone, Args)]
#[command(args_conflicts_with_subcommands = true)]
pub struct JtArgs {
    #[command(subcommand)]
    pub sweep: Option<JtSweepCommand>,
    #[command(flatten)]
    pub targets: JtTargetArgs,
    #[arg(long)]
    pub homega_mev: Option<f64>,
    #[arg(long, default_value_t = jt::DEFAULT_NMAX)]
    pub nmax: usize,
}

#[derive(Debug, Clone, Args)]
pub struct JtTargetArgs {
    #[arg(long, default_value_t = 210.0)]
    pub ejt_mev: f64,
    #[arg(long, default_value_t = 159.0)]
    pub barrier_mev: f64,
}

#[derive(Debug, Clone, Subcommand)]
pub enum JtSweepCommand {
    /// Fit and solve over a range of phonon energies.
    Sweep {
        #[command(flatten)]
        targets: JtTargetArgs,
        /// `min:max:n` in meV.
        #[arg(long, default_value = "50:200:16")]
        homega_range: Grid,
        #[arg(long, default_value_t = jt::DEFAULT_NMAX)]
        nmax: usize,
    },
}

fn parse_override(s: &str) -> std::result::Result<(String, String), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("`{s}` is not of the form key=value"))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

fn parse_vec3(s: &str) -> std::result::Result<Vector3<f64>, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("`{t}` is not a number")))
        .collect::<std::result::Result<_, _>>()?;
    if v.len() != 3 {
        return Err(format!("expected x,y,z (got {} values)", v.len()));
    }
    Ok(Vector3::new(v[0], v[1], v[2]))
}

/// Files written and the verification verdict of one run.
#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub checks: Vec<Check>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        all_passed(&self.checks)
    }
}

struct Sink<'a> {
    dir: PathBuf,
    format: OutputFormat,
    files: Vec<PathBuf>,
    out: &'a mut dyn Write,
}

impl Sink<'_> {
    fn path(&mut self, name: &str) -> Result<PathBuf> {
        std::fs::create_dir_all(&self.dir).map_err(|e| Error::io(&self.dir, e))?;
        let p = self.dir.join(name);
        self.files.push(p.clone());
        Ok(p)
    }

    fn csv(&mut self, name: &str, contents: &str) -> Result<()> {
        if self.format.csv() {
            let p = self.path(name)?;
            io::write_text(&p, contents)?;
        }
        Ok(())
    }

    fn svg(&mut self, name: &str, plot: &SvgPlot) -> Result<()> {
        if self.format.svg() {
            let p = self.path(name)?;
            io::emit_svg(plot, &p)?;
        }
        Ok(())
    }

    fn say(&mut self, line: impl AsRef<str>) -> Result<()> {
        writeln!(self.out, "{}", line.as_ref()).map_err(|e| Error::io("<stdout>", e))
    }
}

fn stem(path: &Path) -> String {
    path.file_stem().and_then(|s| s.to_str()).unwrap_or("out").to_string()
}

/// Executes a parsed job, writing progress lines to `out`.
pub fn run(job: &JobConfig, out: &mut dyn Write) -> Result<Outcome> {
    let mut sink = Sink {
        dir: job.out_dir.clone().unwrap_or_else(|| PathBuf::from(".")),
        format: job.format,
        files: Vec::new(),
        out,
    };
    let checks = match &job.command {
        Command::Lineshape(a) => run_lineshape(a, job.verify, &mut sink)?,
        Command::Odmr(a) => run_odmr(a, job.verify, &mut sink)?,
        Command::Lifetime(a) => run_lifetime(a, job.verify, job.out_dir.is_some(), &mut sink)?,
        Command::Zfs(c) => run_zfs(c, job.verify, &mut sink)?,
        Command::Jt(a) => run_jt(a, job.verify, &mut sink)?,
    };
    for c in &checks {
        sink.say(c.to_string())?;
    }
    Ok(Outcome {
        files: sink.files,
        checks,
    })
}

fn run_lineshape(a: &LineshapeArgs, verify: bool, sink: &mut Sink) -> Result<Vec<Check>> {
    let modes = io::parse_mode_table(&a.modes)?;
    let hr = total_hr(&modes)?;
    sink.say(format!(
        "S_tot = {:.6} (A1 {:.6}, E {:.6}); Stokes shift {:.3} meV",
        hr.total,
        hr.a1,
        hr.e,
        stokes_shift(&modes)?
    ))?;
    let name = stem(&a.modes);
    let mut plot = SvgPlot::new("Photoluminescence", "photon energy (eV)", "intensity (arb. u.)");
    let mut checks = Vec::new();
    for (k, &t) in a.temperatures.iter().enumerate() {
        let job = LineshapeJob {
            zpl_energy_ev: a.zpl_ev,
            temperature_k: t,
            gamma_mev: a.gamma_mev,
            grid: a.grid,
            spectral_smearing_mev: a.smearing_mev,
        };
        let r = job.run(&modes)?;
        sink.say(format!("T = {t} K: ZPL weight {:.6}", zpl_weight(&modes, t)?))?;
        let tag = format!("{name}_{t}K");
        sink.csv(&format!("{tag}_lineshape.csv"), &io::spectrum_to_csv(&r.lineshape))?;
        sink.csv(&format!("{tag}_pl.csv"), &io::spectrum_to_csv(&r.photoluminescence))?;
        sink.csv(&format!("{tag}_absorption.csv"), &io::spectrum_to_csv(&r.absorption))?;
        if k == 0 {
            sink.csv(&format!("{name}_spectral_function.csv"), &io::spectrum_to_csv(&r.spectral_function))?;
        }
        plot = plot.with_series(format!("{t} K"), r.photoluminescence.normalized_to_peak());
        if verify {
            checks.extend(job.verify(&modes)?.into_iter().map(|mut c| {
                c.name = format!("{} ({t} K)", c.name);
                c
            }));
        }
    }
    sink.svg(&format!("{name}_pl.svg"), &plot)?;
    Ok(checks)
}

fn run_odmr(a: &OdmrArgs, verify: bool, sink: &mut Sink) -> Result<Vec<Check>> {
    let file = io::parse_spin_system(&a.system, &a.overrides)?;
    let sweep = file
        .sweep
        .ok_or_else(|| Error::invalid(format!("{} has no [sweep] section", a.system.display())))?;
    let job = OdmrJob {
        system: file.system,
        sweep,
    };
    let r = job.run()?;
    sink.say(format!(
        "{} core transitions, {} lines, Gaussian FWHM {:.3} MHz",
        r.core.len(),
        r.lines.len(),
        r.fwhm_mhz
    ))?;
    let name = stem(&a.system);
    sink.csv(&format!("{name}.csv"), &io::spectrum_to_csv(&r.spectrum))?;
    let floor = STICK_FLOOR * r.core.entries.iter().map(|t| t.intensity).fold(0.0, f64::max);
    let sticks = crate::spin::TransitionList {
        entries: r.core.entries.iter().filter(|t| t.intensity >= floor).cloned().collect(),
    };
    sink.csv(&format!("{name}_sticks.csv"), &io::sticks_to_csv(&sticks))?;
    let b = job.sweep.b_mt;
    let plot = SvgPlot::new(
        format!("cw-ODMR, B = ({}, {}, {}) mT", b.x, b.y, b.z),
        "frequency (MHz)",
        "intensity (arb. u.)",
    )
    .with_series(name.clone(), r.spectrum.normalized_to_peak());
    sink.svg(&format!("{name}.svg"), &plot)?;
    if verify {
        job.verify()
    } else {
        Ok(Vec::new())
    }
}

fn run_lifetime(a: &LifetimeArgs, verify: bool, write: bool, sink: &mut Sink) -> Result<Vec<Check>> {
    let p = EmitterParams::new(a.ezpl_ev, a.dipole_debye, a.refractive_index)?;
    let r = radiative_rate(&p)?;
    sink.say(format!("Gamma = {:.6e} s^-1", r.gamma))?;
    sink.say(format!("tau = {:.6e} s = {:.6} us", r.tau, r.tau_us()))?;
    if write {
        sink.csv(
            "lifetime.csv",
            &format!(
                "ezpl_eV,dipole_debye,n,gamma_per_s,tau_s\n{},{},{},{},{}\n",
                io::format_value(a.ezpl_ev),
                io::format_value(a.dipole_debye),
                io::format_value(a.refractive_index),
                io::format_value(r.gamma),
                io::format_value(r.tau)
            ),
        )?;
    }
    if !verify {
        return Ok(Vec::new());
    }
    let doubled = radiative_rate(&EmitterParams::new(2.0 * a.ezpl_ev, a.dipole_debye, a.refractive_index)?)?;
    let ratio = doubled.gamma / r.gamma;
    let mut checks = vec![Check::new(
        "cubic_energy_scaling",
        r.is_dark() || (ratio - 8.0).abs() < 1e-9,
        format!("Γ(2E)/Γ(E) = {ratio:.12}"),
    )];
    checks.push(Check::new(
        "rate_lifetime_inverse",
        r.is_dark() || (r.gamma * r.tau - 1.0).abs() < 1e-12,
        format!("Γτ = {:.15}", r.gamma * r.tau),
    ));
    Ok(checks)
}

fn tensor_lines(t: &zfs::ZfsTensor) -> Vec<String> {
    let c = &t.components;
    let (d, e) = t.principal_d_e();
    let mut v: Vec<String> = (0..3)
        .map(|i| format!("  [{:>14.6} {:>14.6} {:>14.6}]", c[(i, 0)], c[(i, 1)], c[(i, 2)]))
        .collect();
    v.push(format!("D = 3/2 D_zz = {:.6} MHz; principal D = {d:.6} MHz, E = {e:.6} MHz", t.d_scalar()));
    v
}

fn tensor_csv(t: &zfs::ZfsTensor) -> String {
    let c = &t.components;
    let mut s = String::from("row,x,y,z\n");
    for (i, axis) in ["x", "y", "z"].iter().enumerate() {
        s.push_str(&format!(
            "{axis},{},{},{}\n",
            io::format_value(c[(i, 0)]),
            io::format_value(c[(i, 1)]),
            io::format_value(c[(i, 2)])
        ));
    }
    s
}

fn tensor_checks(t: &zfs::ZfsTensor) -> Vec<Check> {
    let tr = t.trace();
    let asym = t.asymmetry();
    vec![
        Check::new("traceless", tr.abs() <= 1e-6, format!("trace {tr:.3e} MHz")),
        Check::new("symmetric", asym <= 1e-6, format!("max |D_ab − D_ba| {asym:.3e} MHz")),
    ]
}

fn run_zfs(c: &ZfsCommand, verify: bool, sink: &mut Sink) -> Result<Vec<Check>> {
    match c {
        ZfsCommand::Generate {
            kind,
            cell,
            points,
            center,
            sigma,
            axis,
            label,
            binary,
        } => {
            let cell_m = Matrix3::identity() * *cell;
            let dims = [*points; 3];
            let o = match kind {
                OrbitalKind::Gaussian => zfs::gaussian_orbital(label.clone(), cell_m, dims, *center, *sigma)?,
                OrbitalKind::P => {
                    let dir = match axis {
                        AxisName::X => Vector3::x(),
                        AxisName::Y => Vector3::y(),
                        AxisName::Z => Vector3::z(),
                    };
                    zfs::p_orbital(label.clone(), cell_m, dims, *center, dir, *sigma)?
                }
            };
            let (ext, fmt) = if *binary { ("bin", GridFormat::Binary) } else { ("grid", GridFormat::Text) };
            let p = sink.path(&format!("{label}.{ext}"))?;
            io::write_orbital(&o, &p, fmt)?;
            sink.say(format!("wrote {}", p.display()))?;
            let norm = o.norm_squared();
            Ok(if verify {
                vec![Check::new("normalized", (norm - 1.0).abs() <= 1e-6, format!("⟨ψ|ψ⟩ = {norm:.12}"))]
            } else {
                Vec::new()
            })
        }
        ZfsCommand::Pair { first, second, g } => {
            let a = io::read_orbital(first)?;
            let b = io::read_orbital(second)?;
            let kernel = zfs::DipolarKernel::with_g(a.cell, a.dims, *g)?;
            let t = kernel.pair(&a, &b)?;
            for l in tensor_lines(&t) {
                sink.say(l)?;
            }
            sink.csv("zfs_pair.csv", &tensor_csv(&t))?;
            if !verify {
                return Ok(Vec::new());
            }
            let mut checks = tensor_checks(&t);
            let swapped = kernel.pair(&b, &a)?;
            let diff = (t - swapped).max_abs();
            checks.push(Check::new(
                "exchange_symmetry",
                diff <= 1e-4 * t.max_abs().max(1e-12),
                format!("max |D(a,b) − D(b,a)| {diff:.3e} MHz"),
            ));
            Ok(checks)
        }
        ZfsCommand::Sum { orbitals, total_spin } => {
            let mut list = Vec::with_capacity(orbitals.len());
            for spec in orbitals {
                let (path, spin) = spec
                    .rsplit_once(':')
                    .ok_or_else(|| Error::invalid(format!("`{spec}`: expected path:up or path:down")))?;
                let spin = match spin {
                    "up" => SpinLabel::Up,
                    "down" => SpinLabel::Down,
                    other => return Err(Error::invalid(format!("`{other}` is not a spin label (up/down)"))),
                };
                list.push(SpinOrbital {
                    orbital: io::read_orbital(Path::new(path))?,
                    spin,
                });
            }
            let t = zfs::zfs_sum(&list, *total_spin)?;
            for l in tensor_lines(&t) {
                sink.say(l)?;
            }
            sink.csv("zfs_sum.csv", &tensor_csv(&t))?;
            Ok(if verify { tensor_checks(&t) } else { Vec::new() })
        }
        ZfsCommand::Decontaminate { d_ferro_mhz, d_broken_mhz } => {
            let d = zfs::decontaminate(*d_ferro_mhz, *d_broken_mhz);
            sink.say(format!("D = {d:.6} MHz"))?;
            Ok(Vec::new())
        }
    }
}

fn run_jt(a: &JtArgs, verify: bool, sink: &mut Sink) -> Result<Vec<Check>> {
    if let Some(JtSweepCommand::Sweep {
        targets,
        homega_range,
        nmax,
    }) = &a.sweep
    {
        let t = JtTargets {
            e_jt: targets.ejt_mev,
            barrier: targets.barrier_mev,
        };
        let points = jt::sweep(t, &homega_range.points(), *nmax)?;
        let mut csv = String::from("homega_meV,F,G,p\n");
        for p in &points {
            csv.push_str(&format!(
                "{},{},{},{}\n",
                io::format_value(p.hbar_omega),
                io::format_value(p.couplings.f),
                io::format_value(p.couplings.g),
                io::format_value(p.solution.ham_factor)
            ));
            sink.say(format!(
                "ħω = {:8.3} meV  F = {:9.4}  G = {:8.4}  p = {:.6}",
                p.hbar_omega, p.couplings.f, p.couplings.g, p.solution.ham_factor
            ))?;
        }
        sink.csv("jt_sweep.csv", &csv)?;
        let mut meta = SpectrumMeta::new(SpectrumKind::Lineshape);
        meta.set("quantity", "ham_factor");
        let curve = Spectrum::new(
            points.iter().map(|p| p.hbar_omega).collect(),
            points.iter().map(|p| p.solution.ham_factor).collect(),
            meta,
        )?;
        let mut plot = SvgPlot::new("Ham reduction factor", "ħω (meV)", "p").with_series("p", curve);
        plot.log_y = true;
        sink.svg("jt_sweep.svg", &plot)?;
        return Ok(Vec::new());
    }
    let homega = a
        .homega_mev
        .ok_or_else(|| Error::invalid("jt needs --homega-mev (or the `sweep` subcommand)"))?;
    let job = JtJob {
        targets: JtTargets {
            e_jt: a.targets.ejt_mev,
            barrier: a.targets.barrier_mev,
        },
        hbar_omega: homega,
        n_max: a.nmax,
    };
    let r = job.run()?;
    let s = &r.solution;
    sink.say(format!("F = {:.6} meV, G = {:.6} meV", r.couplings.f, r.couplings.g))?;
    sink.say(format!(
        "ground doublet {:.6} / {:.6} meV, lowest A level {:.6} meV (n_max = {}, convergence {:.2e} meV)",
        s.ground_doublet.0, s.ground_doublet.1, s.singlet_energy, s.model.n_max, s.convergence
    ))?;
    sink.say(format!("p = {:.6}", s.ham_factor))?;
    if verify {
        job.verify()
    } else {
        Ok(Vec::new())
    }
}

/// Applies the worker cap from [`THREADS_ENV`], if set.
pub fn configure_threads() -> std::result::Result<(), String> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer (got `{v}`)"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

/// Parses `args`, runs the job and returns the process exit code:
/// 0 on success, 1 on a module error or failed verification, 2 on usage errors.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let job = match JobConfig::try_parse_from(args) {
        Ok(j) => j,
        Err(e) => {
            let code = e.exit_code();
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    match run(&job, out) {
        Ok(outcome) if outcome.passed() => 0,
        Ok(_) => {
            let _ = writeln!(err, "{}: verification failed", job.command.name());
            1
        }
        Err(e) => {
            let _ = writeln!(err, "{}: {e}", job.command.name());
            1
        }
    }
}
