use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use fermat_kerd2::cohomology::bar_cohomology_dim;
use fermat_kerd2::cyclotomic::{
    conductor_cyclotomic, conductor_heisenberg, gamma, gamma_action_holds, verify_gamma_action,
    CyclotomicInteger,
};
use fermat_kerd2::transgression::{
    invariant_homs, ker_d2, ker_d2_heisenberg, preset_ker_d2, KerD2Result, QuotientPreset,
};
use fermat_kerd2::{data, GaloisActionData, HomologyModule, ModuleKind, NData, Prime};

#[derive(Parser, Debug)]
#[command(
    name = "kerd2",
    version,
    about = "Transgression kernels for Fermat-curve homology over F_p"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Odd prime p.
    #[arg(long, global = true, default_value_t = 3)]
    p: u64,

    /// Homology module.
    #[arg(long, global = true, default_value = "UY")]
    module: ModuleKind,

    /// Action file (required for p >= 5).
    #[arg(long, global = true)]
    action_file: Option<PathBuf>,

    /// N-data file (required for p >= 5 by kerd2 and cohomology).
    #[arg(long, global = true)]
    n_data_file: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dimension and basis of M^Q.
    Invariants,
    /// Hom(N, M)^Q and its transgression kernel, with witnesses.
    Kerd2,
    /// The Heisenberg part of the kernel.
    Heisenberg,
    /// Kernel for a quotient preset of N with trivial action.
    Preset {
        /// rayclass, cyclotomic, kummer or heisenberg.
        #[arg(long)]
        name: String,
        /// Dimension of the rayclass quotient.
        #[arg(long, default_value_t = 1)]
        rho: usize,
    },
    /// dim H^k(Q, N) through the normalized bar complex.
    Cohomology {
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Exact identities in Z[zeta_{p^2}] and the two conductors.
    VerifyCyclotomic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Kv,
}

enum Failure {
    Usage(String),
    Mismatch(String),
    Internal(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Internal(e)
    }
}

impl From<fermat_kerd2::Error> for Failure {
    fn from(e: fermat_kerd2::Error) -> Self {
        Failure::Internal(e.into())
    }
}

/// Ordered key/value pairs plus named lists.
#[derive(Default)]
struct Report {
    entries: Vec<(String, String)>,
    lists: Vec<(String, Vec<String>)>,
}

impl Report {
    fn put(&mut self, key: &str, value: impl ToString) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    fn list(&mut self, key: &str, items: Vec<String>) {
        self.lists.push((key.to_string(), items));
    }

    fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Kv => {
                for (k, v) in &self.entries {
                    let _ = writeln!(out, "{k}={v}");
                }
                for (k, items) in &self.lists {
                    for (i, item) in items.iter().enumerate() {
                        let _ = writeln!(out, "{k}[{i}]={item}");
                    }
                }
            }
            Format::Table => {
                let width = self.entries.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, v) in &self.entries {
                    let _ = writeln!(out, "{k:<width$}  {v}");
                }
                for (k, items) in &self.lists {
                    let _ = writeln!(out, "\n{k}:");
                    if items.is_empty() {
                        let _ = writeln!(out, "  (none)");
                    }
                    for (i, item) in items.iter().enumerate() {
                        let _ = writeln!(out, "  {i:>3}  {item}");
                    }
                }
            }
        }
        out
    }
}

struct RunConfig {
    prime: Prime,
    cli: Cli,
}

impl RunConfig {
    fn action(&self) -> Result<GaloisActionData, Failure> {
        let action = match &self.cli.action_file {
            Some(path) => GaloisActionData::load(path)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
            None if self.prime.get() == 3 => GaloisActionData::builtin_p3(),
            None => {
                return Err(Failure::Usage(format!(
                    "p = {} needs --action-file",
                    self.prime
                )))
            }
        };
        if action.prime() != self.prime {
            return Err(Failure::Usage(format!(
                "action file is for p = {}, but --p is {}",
                action.prime(),
                self.prime
            )));
        }
        Ok(action)
    }

    fn n_data(&self) -> Result<NData, Failure> {
        let n = match &self.cli.n_data_file {
            Some(path) => {
                NData::load(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
            }
            None if self.prime.get() == 3 => data::n7(),
            None => {
                return Err(Failure::Usage(format!(
                    "p = {} needs --n-data-file",
                    self.prime
                )))
            }
        };
        if n.module.prime() != self.prime {
            return Err(Failure::Usage(format!(
                "N-data file is for p = {}, but --p is {}",
                n.module.prime(),
                self.prime
            )));
        }
        Ok(n)
    }

    fn module(&self) -> Result<HomologyModule, Failure> {
        Ok(HomologyModule::new(self.prime, self.cli.module)?)
    }
}

fn describe_map(m: &HomologyModule, map: &fermat_kerd2::FpMatrix) -> Result<String, Failure> {
    let mut parts = Vec::new();
    for j in 0..map.cols() {
        let image = map.column(j);
        if image.iter().any(|&x| x != 0) {
            parts.push(format!("n{} -> {}", j + 1, m.format_vector(&image)?));
        }
    }
    Ok(if parts.is_empty() {
        "0".into()
    } else {
        parts.join(", ")
    })
}

fn describe_witness(m: &HomologyModule, witness: &[Vec<u32>]) -> Result<String, Failure> {
    let parts = witness
        .iter()
        .enumerate()
        .map(|(i, v)| Ok(format!("m{i} = {}", m.format_vector(v)?)))
        .collect::<Result<Vec<_>, Failure>>()?;
    Ok(parts.join(", "))
}

fn kernel_report(report: &mut Report, m: &HomologyModule, k: &KerD2Result) -> Result<(), Failure> {
    if !k.verify()? {
        return Err(Failure::Mismatch(
            "a kernel witness fails the criterion".into(),
        ));
    }
    let basis = k
        .basis_maps()
        .iter()
        .map(|map| describe_map(m, map))
        .collect::<Result<Vec<_>, _>>()?;
    let witnesses = k
        .witnesses()
        .iter()
        .map(|w| describe_witness(m, w))
        .collect::<Result<Vec<_>, _>>()?;
    report.list("kernel_basis", basis);
    report.list("witness", witnesses);
    Ok(())
}

fn invariants(ctx: &RunConfig) -> Result<Report, Failure> {
    let action = ctx.action()?;
    let m = ctx.module()?;
    let mq = action.invariants_subspace(&m)?;
    let mut r = Report::default();
    r.put("p", ctx.prime);
    r.put("module", m.kind());
    r.put("dim_M", m.dim());
    r.put("dim_MQ", mq.dim());
    let basis = mq
        .basis_vectors()
        .iter()
        .map(|v| m.format_vector(v))
        .collect::<Result<Vec<_>, _>>()?;
    r.list("MQ_basis", basis);
    Ok(r)
}

fn kerd2(ctx: &RunConfig) -> Result<Report, Failure> {
    let action = ctx.action()?;
    let m = ctx.module()?;
    let n = ctx.n_data()?;
    let ext = n
        .extension
        .as_ref()
        .ok_or_else(|| Failure::Usage("the N-data has no a[i] and c[j,k] lines".into()))?;
    let homs = invariant_homs(&n.module, &m, &action)?;
    let k = ker_d2(&homs, ext)?;
    let mut r = Report::default();
    r.put("p", ctx.prime);
    r.put("module", m.kind());
    r.put("dim_N", n.module.dim());
    r.put("dim_invhoms", homs.dim());
    r.put("dim_kerd2", k.dim());
    kernel_report(&mut r, &m, &k)?;
    Ok(r)
}

fn heisenberg(ctx: &RunConfig) -> Result<Report, Failure> {
    let action = ctx.action()?;
    let m = ctx.module()?;
    let h = ker_d2_heisenberg(&action, &m)?;
    if !h.verify(&action, &m)? {
        return Err(Failure::Mismatch(
            "a Heisenberg witness fails its constraints".into(),
        ));
    }
    let mut r = Report::default();
    r.put("p", ctx.prime);
    r.put("module", m.kind());
    r.put("dim_imT", h.image.dim());
    r.put("dim_ker", h.kernel.dim());
    let d = m.dim();
    let basis = h
        .kernel
        .basis_vectors()
        .iter()
        .map(|v| {
            let parts = v
                .chunks(d)
                .enumerate()
                .map(|(k, mu)| Ok(format!("mu{} = {}", k + 1, m.format_vector(mu)?)))
                .collect::<Result<Vec<_>, Failure>>()?;
            Ok(parts.join(", "))
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    r.list("kernel_basis", basis);
    Ok(r)
}

fn preset(ctx: &RunConfig, name: &str, rho: usize) -> Result<Report, Failure> {
    let preset = QuotientPreset::from_name(name, rho).map_err(|e| Failure::Usage(e.to_string()))?;
    let action = ctx.action()?;
    let m = ctx.module()?;
    let k = preset_ker_d2(preset, &m, &action)?;
    let mut r = Report::default();
    r.put("p", ctx.prime);
    r.put("module", m.kind());
    r.put("preset", preset);
    r.put("dim_invhoms", k.homs().dim());
    r.put("dim_ker", k.dim());
    kernel_report(&mut r, &m, &k)?;
    Ok(r)
}

fn cohomology(ctx: &RunConfig, k: usize) -> Result<Report, Failure> {
    let n = ctx.n_data()?;
    let dim = bar_cohomology_dim(&n.module, k).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut r = Report::default();
    r.put("p", ctx.prime);
    r.put("dim_N", n.module.dim());
    r.put(&format!("dim_H{k}"), dim);
    Ok(r)
}

fn verify_cyclotomic(ctx: &RunConfig) -> Result<Report, Failure> {
    let p = ctx.prime;
    let ok = |b: bool| if b { "ok" } else { "FAILED" };
    let mut r = Report::default();
    let mut all = true;
    r.put("p", p);
    for i in 1..p.get() as i64 {
        let beta = CyclotomicInteger::one_minus_w_pow(p, -i);
        let want = &CyclotomicInteger::one(p) - &CyclotomicInteger::zeta_p_pow(p, -i);
        let good = beta.norm_to_k()? == want;
        all &= good;
        r.put(&format!("norm_identity_{i}"), ok(good));
    }
    for i in 1..=p.half() as u32 {
        let good = verify_gamma_action(p, i)?;
        all &= good;
        r.put(&format!("gamma_action_{i}"), ok(good));
        let v = gamma(p, i)?.valuation();
        let good = v == Some(p.get() * p.half() as u32);
        all &= good;
        r.put(
            &format!("valuation_gamma_{i}"),
            v.map_or("inf".to_string(), |v| v.to_string()),
        );
    }
    let rejected = !gamma_action_holds(p, 1, 1)?;
    all &= rejected;
    r.put("tau0_substitute_rejected", ok(rejected));
    r.put("conductor_heisenberg", conductor_heisenberg(p));
    r.put("conductor_cyclotomic", conductor_cyclotomic(p));
    if !all {
        return Err(Failure::Mismatch(r.render(ctx.cli.format)));
    }
    Ok(r)
}

fn run(cli: Cli) -> Result<String, Failure> {
    let prime = Prime::new(cli.p)
        .context("--p")
        .map_err(|e| Failure::Usage(format!("{e:#}")))?;
    let ctx = RunConfig { prime, cli };
    let report = match &ctx.cli.command {
        Command::Invariants => invariants(&ctx)?,
        Command::Kerd2 => kerd2(&ctx)?,
        Command::Heisenberg => heisenberg(&ctx)?,
        Command::Preset { name, rho } => preset(&ctx, name, *rho)?,
        Command::Cohomology { k } => cohomology(&ctx, *k)?,
        Command::VerifyCyclotomic => verify_cyclotomic(&ctx)?,
    };
    Ok(report.render(ctx.cli.format))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Mismatch(msg)) => {
            eprintln!("check failed:\n{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
