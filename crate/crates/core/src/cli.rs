//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::boxcx::box_edge;
use crate::cellcx::export::{dump_with, hasse_dot};
use crate::cellcx::{barycentric_subdivision, CellComplex};
use crate::collapse::{
    check_image_isomorphism, image_subcomplex, main_theorem_certificate, replay_theorem,
    TheoremCertificate,
};
use crate::error::{Error, Limits, Result};
use crate::homcx::hom_complex;
use crate::homology::{betti, homology_agreement, Coeff};
use crate::label::Label;
use crate::morse::{build_matching, ChainTag};
use crate::rgraph::RGraph;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_GUARD: i32 = 3;
pub const EXIT_INPUT: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "hombox", version, about = "Box and Hom complexes of uniform hypergraphs with collapse certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a complex and print its cell counts.
    Build(BuildArgs),
    /// Build and check the matching on the subdivided box complex.
    Verify(VerifyArgs),
    /// Certify the simple homotopy equivalence and compare homology.
    Theorem(TheoremArgs),
    /// Re-check a certificate written by `theorem`.
    Replay(ReplayArgs),
    /// Homology report of a simplicial complex.
    Homology(HomologyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ComplexKind {
    Box,
    Hom,
    SdBox,
    SdHom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CoeffArg {
    Z,
    Z2,
}

impl From<CoeffArg> for Coeff {
    fn from(c: CoeffArg) -> Self {
        match c {
            CoeffArg::Z => Coeff::Z,
            CoeffArg::Z2 => Coeff::Z2,
        }
    }
}

#[derive(Args, Debug)]
pub struct Common {
    /// Graph JSON: {"r": .., "vertices": [..], "edges": [[..]..]}
    #[arg(long)]
    pub input: PathBuf,
    /// Abort when a complex would exceed this many cells.
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_cells: u64,
}

impl Common {
    fn limits(&self) -> Limits {
        Limits::with_max_cells(self.max_cells as usize)
    }
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value_t = ComplexKind::Box)]
    pub complex: ComplexKind,
    /// Write the cell-complex JSON here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the Hasse diagram in DOT format here.
    #[arg(long)]
    pub dot: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Write the matching certificate here.
    #[arg(long)]
    pub certificate: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TheoremArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value_t = CoeffArg::Z)]
    pub coeff: CoeffArg,
    /// Write the deformation certificate here.
    #[arg(long)]
    pub certificate: Option<PathBuf>,
    /// Write the homology comparison here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ReplayArgs {
    #[arg(long)]
    pub certificate: PathBuf,
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_cells: u64,
}

#[derive(Args, Debug)]
pub struct HomologyArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value_t = ComplexKind::SdBox)]
    pub complex: ComplexKind,
    #[arg(long, value_enum, default_value_t = CoeffArg::Z)]
    pub coeff: CoeffArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A failed run: an error from the library, or a check that came out false.
enum Failure {
    Lib(Error),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Run = std::result::Result<(), Failure>;

fn read_graph(path: &Path) -> Result<RGraph> {
    RGraph::from_json_str(&fs::read_to_string(path)?)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    fs::write(path, s)?;
    Ok(())
}

/// The selected complex with the payload to show for each cell.
fn select(h: &RGraph, kind: ComplexKind, limits: &Limits) -> Result<(CellComplex, Vec<Label>)> {
    Ok(match kind {
        ComplexKind::Box | ComplexKind::SdBox => {
            let bx = box_edge(h, limits)?;
            if kind == ComplexKind::Box {
                let labels = (0..bx.len()).map(|c| bx.complex.cell_label(c)).collect();
                (bx.complex, labels)
            } else {
                let sd = barycentric_subdivision(&bx.complex, limits)?;
                let labels = (0..sd.len()).map(|c| sd.cell_label(c)).collect();
                (sd, labels)
            }
        }
        ComplexKind::Hom | ComplexKind::SdHom => {
            let hk = hom_complex(h, limits)?;
            if kind == ComplexKind::Hom {
                let labels = (0..hk.len()).map(|c| hk.multihom(c).to_label(h)).collect();
                (hk.complex, labels)
            } else {
                let sd = barycentric_subdivision(&hk.complex, limits)?;
                let labels = (0..sd.len()).map(|c| sd.cell_label(c)).collect();
                (sd, labels)
            }
        }
    })
}

fn counts_line(k: &CellComplex) -> String {
    let counts = k.counts_by_dim();
    let parts: Vec<String> = counts
        .iter()
        .enumerate()
        .map(|(d, n)| format!("dim {d}: {n}"))
        .collect();
    if parts.is_empty() {
        "empty complex".into()
    } else {
        format!("{} cells ({})", k.len(), parts.join(", "))
    }
}

fn cmd_build(a: &BuildArgs, out: &mut dyn Write) -> Run {
    let limits = a.common.limits();
    let h = read_graph(&a.common.input)?;
    let (k, labels) = select(&h, a.complex, &limits)?;
    let _ = writeln!(out, "{}", counts_line(&k));
    let _ = writeln!(out, "top cells: {}", k.facets().len());
    if let Some(p) = &a.out {
        write_json(p, &dump_with(&k, |c| labels[c].clone()))?;
    }
    if let Some(p) = &a.dot {
        fs::write(p, hasse_dot(&k, |c| labels[c].clone())).map_err(Error::from)?;
    }
    Ok(())
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Run {
    let limits = a.common.limits();
    let h = read_graph(&a.common.input)?;
    let lemma = build_matching(&h, &limits)?;
    let hom = hom_complex(&h, &limits)?;
    let (image, image_a) = image_subcomplex(&lemma)?;
    check_image_isomorphism(&hom, &lemma.boxc, &image, &image_a, &limits)?;
    let _ = writeln!(out, "box complex: {}", counts_line(&lemma.boxc.complex));
    let _ = writeln!(out, "chains: {}", lemma.sd.len());
    if lemma.d_len() == 0 {
        let _ = writeln!(out, "D empty; complexes isomorphic");
    } else {
        let _ = writeln!(
            out,
            "D: {} chains; first kind {}, second kind {}, matched pairs {}",
            lemma.d_len(),
            lemma.count(ChainTag::Sigma1),
            lemma.count(ChainTag::Sigma2),
            lemma.matching.len()
        );
    }
    let _ = writeln!(out, "critical: {} chains of the image of i", lemma.matching.critical.len());
    let _ = writeln!(out, "partition, injectivity, covering, equivariance, acyclicity: ok");
    let _ = writeln!(out, "critical chains isomorphic to sd Hom: ok");
    if let Some(p) = &a.certificate {
        write_json(p, &lemma.certificate())?;
    }
    Ok(())
}

fn cmd_theorem(a: &TheoremArgs, out: &mut dyn Write) -> Run {
    let limits = a.common.limits();
    let h = read_graph(&a.common.input)?;
    let run = main_theorem_certificate(&h, &limits)?;
    for s in &run.certificate.stages {
        let steps: usize = s.segments.iter().map(|g| g.steps.len()).sum();
        let _ = writeln!(out, "stage {}: {:?}, {} steps, ok", s.name, s.relation, steps);
    }
    if let Some(p) = &a.certificate {
        write_json(p, &run.certificate)?;
    }
    let agreement = homology_agreement(&h, a.coeff.into(), &limits)?;
    let _ = writeln!(
        out,
        "homology: box {:?} / hom {:?}",
        agreement.box_complex.betti, agreement.hom_complex.betti
    );
    if let Some(p) = &a.out {
        write_json(p, &agreement)?;
    }
    if !agreement.agree {
        return Err(Failure::Check("homology differs".into()));
    }
    let _ = writeln!(out, "theorem: ok");
    Ok(())
}

fn cmd_replay(a: &ReplayArgs, out: &mut dyn Write) -> Run {
    let limits = Limits::with_max_cells(a.max_cells as usize);
    let text = fs::read_to_string(&a.certificate).map_err(Error::from)?;
    let cert: TheoremCertificate = serde_json::from_str(&text).map_err(Error::from)?;
    replay_theorem(&cert, &limits)?;
    let _ = writeln!(out, "replayed {} steps: ok", cert.num_steps());
    Ok(())
}

fn cmd_homology(a: &HomologyArgs, out: &mut dyn Write) -> Run {
    let limits = a.common.limits();
    let h = read_graph(&a.common.input)?;
    let kind = match a.complex {
        // polytopal cells are handled through the subdivision
        ComplexKind::Hom => ComplexKind::SdHom,
        k => k,
    };
    let (k, _) = select(&h, kind, &limits)?;
    let report = betti(&k, a.coeff.into(), &limits)?;
    let s = serde_json::to_string(&report).map_err(Error::from)?;
    let _ = writeln!(out, "{s}");
    if let Some(p) = &a.out {
        write_json(p, &report)?;
    }
    Ok(())
}

/// Runs the CLI on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_INPUT;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    let result = match &cli.command {
        Command::Build(a) => cmd_build(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Theorem(a) => cmd_theorem(a, out),
        Command::Replay(a) => cmd_replay(a, out),
        Command::Homology(a) => cmd_homology(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Check(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_VERIFY
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_size_guard() {
                EXIT_GUARD
            } else if e.is_input_error() {
                EXIT_INPUT
            } else {
                EXIT_VERIFY
            }
        }
    }
}
