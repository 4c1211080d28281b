//! The `layered-regen` command line.
//!
//! Codes live in a directory holding `code.json`, `design.txt` and one
//! `node_<id>.txt` per node. Analysis commands print CSV (or JSON) on stdout
//! and, when an output directory is given, also write it to files there.
//! Every command that writes files also writes `<command>.manifest.json`.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bandwidth::{Coverage, RepairAccounting, ReportJson};
use crate::design::{BlockDesign, NodeId};
use crate::error::{Error, Result};
use crate::exact::RationalJson;
use crate::gf::{BinaryField, Elem, DEFAULT_WIDTH};
use crate::layered::{LayeredCode, SystemParams};
use crate::nodefile::NodeFile;
use crate::precoded::{PrecodedCode, PrecodedParams};
use crate::region::{
    accounting_curves, achievable_points_c1, achievable_points_general,
    achievable_points_layered, corner_points, extreme_points, point_rows, write_rows, ModeRow,
    PointRow, TradeoffPoint,
};
use crate::verify;

/// Environment variable that sets the output directory.
pub const OUT_ENV: &str = "LAYERED_REGEN_OUT";
pub const DEFAULT_SEED: u64 = 0x1a7e_2ed5;
const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(
    name = "layered-regen",
    version,
    about = "Layered regenerating codes: build, encode, repair, and analyze storage/bandwidth tradeoffs"
)]
pub struct Cli {
    /// Output directory.
    #[arg(long, global = true, env = OUT_ENV)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate or load a block design and print its statistics.
    Design(DesignArgs),
    /// Encode data into a directory of node files.
    Encode(EncodeArgs),
    /// Repair failed nodes from helper node files.
    Repair(RepairArgs),
    /// Recover the data from a set of node files.
    Reconstruct(ReconstructArgs),
    /// Add a node to a (k+e, k, k, e) optimal-point code.
    Extend(ExtendArgs),
    /// Corner points of the (k+e, k, k, e) tradeoff region.
    Region(RegionArgs),
    /// Achievable points of a general (n, k, d, e) system.
    Points(PointsArgs),
    /// Layered-naive and MSMR-accounted repair bandwidth curves.
    Compare(CompareArgs),
    /// Run the built-in oracle suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Args, Serialize)]
pub struct DesignArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub r: u32,
    /// Strength; defaults to r (the complete design).
    #[arg(long)]
    pub t: Option<u32>,
    /// Read the design from a file instead of generating it.
    #[arg(long)]
    pub load: Option<PathBuf>,
    /// Write the design file here.
    #[arg(long)]
    pub save: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct CodeArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub d: u32,
    #[arg(long)]
    pub e: u32,
    /// Erasure tolerance of each group; defaults to n - k. Smaller values
    /// select the precoded construction.
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub r: u32,
    /// Design strength; defaults to r.
    #[arg(long)]
    pub t: Option<u32>,
    /// Design file, required when t < r.
    #[arg(long)]
    pub design: Option<PathBuf>,
    /// Base field GF(2^w).
    #[arg(long, default_value_t = DEFAULT_WIDTH)]
    pub width: u8,
}

#[derive(Debug, Args, Serialize)]
pub struct EncodeArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Raw data file, zero-padded to the code capacity. Random data from
    /// `--seed` is used (and saved as data.bin) when absent.
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct RepairArgs {
    /// Code directory.
    #[arg(long)]
    pub dir: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    pub failed: Vec<NodeId>,
    /// Defaults to the d lowest-numbered surviving nodes.
    #[arg(long, value_delimiter = ',')]
    pub helpers: Option<Vec<NodeId>>,
}

#[derive(Debug, Args, Serialize)]
pub struct ReconstructArgs {
    /// Code directory.
    #[arg(long)]
    pub dir: PathBuf,
    /// Defaults to nodes 1..=k.
    #[arg(long, value_delimiter = ',')]
    pub nodes: Option<Vec<NodeId>>,
    /// Defaults to reconstructed.bin in the output directory.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ExtendArgs {
    /// Code directory of the (k+e, k, k, e) code.
    #[arg(long)]
    pub dir: PathBuf,
    /// Data for the added block; random from `--seed` when absent.
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct RegionArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub e: u32,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args, Serialize)]
pub struct PointsArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub d: u32,
    #[arg(long)]
    pub e: u32,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args, Serialize)]
pub struct CompareArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub d: u32,
    #[arg(long, default_value_t = 1)]
    pub e: u32,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

/// Record of one invocation, written next to its outputs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub parameters: serde_json::Value,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub seed: Option<u64>,
}

/// Contents of `code.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeSpec {
    pub version: String,
    pub width: u8,
    pub n: u32,
    pub k: u32,
    pub d: u32,
    pub e: u32,
    pub m: u32,
    pub r: u32,
    pub t: u32,
    pub precoded: bool,
    pub kappa: usize,
    /// Information symbols, each `kappa` base-field coordinates.
    pub symbols: usize,
    /// Length of the original data in bytes.
    pub data_bytes: usize,
}

pub fn run(cli: Cli) -> Result<()> {
    let out = cli.out.as_deref();
    match cli.command {
        Command::Design(a) => cmd_design(&a, out),
        Command::Encode(a) => cmd_encode(&a, out),
        Command::Repair(a) => cmd_repair(&a, out),
        Command::Reconstruct(a) => cmd_reconstruct(&a, out),
        Command::Extend(a) => cmd_extend(&a, out),
        Command::Region(a) => cmd_region(&a, out),
        Command::Points(a) => cmd_points(&a, out),
        Command::Compare(a) => cmd_compare(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
    }
}

/// Exit status for a finished run: 0, 2 for bad input, 3 for a broken
/// internal guarantee.
pub fn exit_code(result: &Result<()>) -> u8 {
    match result {
        Ok(()) => 0,
        Err(e) if e.is_invariant_violation() => 3,
        Err(_) => 2,
    }
}

// ---------------------------------------------------------------- plumbing

/// Write via a temporary file in the same directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn print(bytes: &[u8]) -> Result<()> {
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(bytes)?;
    stdout.flush()?;
    Ok(())
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn read_text(path: &Path) -> Result<String> {
    String::from_utf8(read(path)?)
        .map_err(|_| Error::params(format!("{} is not UTF-8", path.display())))
}

fn node_path(dir: &Path, node: NodeId) -> PathBuf {
    dir.join(format!("node_{node}.txt"))
}

fn display(p: &Path) -> String {
    p.display().to_string()
}

/// Files written by one command, with a manifest appended at the end.
struct Outputs<'a> {
    dir: &'a Path,
    written: Vec<String>,
}

impl<'a> Outputs<'a> {
    fn new(dir: &'a Path) -> Self {
        Outputs {
            dir,
            written: Vec::new(),
        }
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        write_atomic(&self.dir.join(name), bytes)?;
        self.written.push(name.to_string());
        Ok(())
    }

    fn finish<P: Serialize>(
        mut self,
        command: &str,
        params: &P,
        inputs: Vec<String>,
        seed: Option<u64>,
    ) -> Result<()> {
        let name = format!("{command}.manifest.json");
        let manifest = RunManifest {
            command: command.to_string(),
            version: VERSION.to_string(),
            parameters: serde_json::to_value(params)?,
            inputs,
            outputs: self.written.clone(),
            seed,
        };
        self.write(&name, &json_bytes(&manifest)?)
    }
}

fn require_out<'a>(out: Option<&'a Path>, command: &str) -> Result<&'a Path> {
    out.ok_or_else(|| {
        Error::params(format!(
            "{command} needs an output directory: pass --out DIR or set {OUT_ENV}"
        ))
    })
}

// ------------------------------------------------------------------ design

#[derive(Debug, Serialize)]
struct DesignReport {
    n: u32,
    r: u32,
    t: u32,
    blocks: usize,
    steiner: bool,
    alpha: Option<u64>,
    lambda2: Option<u64>,
    lambda3: Option<u64>,
}

fn load_or_generate(n: u32, r: u32, t: Option<u32>, load: Option<&Path>) -> Result<BlockDesign> {
    let design = match load {
        Some(path) => BlockDesign::parse(&read_text(path)?)?,
        None => {
            let t = t.unwrap_or(r);
            if t != r {
                return Err(Error::params(
                    "only the complete (t = r) design is generated; pass --load for t < r",
                ));
            }
            BlockDesign::complete(n, r)?
        }
    };
    if design.n() != n || design.r() != r || t.is_some_and(|t| t != design.t()) {
        return Err(Error::params(format!(
            "design is S({}, {}, {}), expected n={n}, r={r}{}",
            design.t(),
            design.r(),
            design.n(),
            t.map(|t| format!(", t={t}")).unwrap_or_default()
        )));
    }
    Ok(design)
}

fn cmd_design(a: &DesignArgs, out: Option<&Path>) -> Result<()> {
    let design = load_or_generate(a.n, a.r, a.t, a.load.as_deref())?;
    let steiner = design.verify_steiner();
    let stats = if steiner { Some(design.stats()?) } else { None };
    let report = DesignReport {
        n: design.n(),
        r: design.r(),
        t: design.t(),
        blocks: design.num_blocks(),
        steiner,
        alpha: stats.map(|s| s.alpha_sym),
        lambda2: stats.map(|s| s.lambda2),
        lambda3: stats.map(|s| s.lambda3),
    };
    let text = design.to_text();
    if let Some(path) = &a.save {
        write_atomic(path, text.as_bytes())?;
    }
    let bytes = json_bytes(&report)?;
    if let Some(dir) = out {
        let mut outputs = Outputs::new(dir);
        outputs.write("design.txt", text.as_bytes())?;
        outputs.write("design.json", &bytes)?;
        let inputs = a.load.iter().map(|p| display(p)).collect();
        outputs.finish("design", a, inputs, None)?;
    }
    print(&bytes)
}

// ------------------------------------------------------------- code files

enum Code {
    Layered(LayeredCode),
    Precoded(PrecodedCode),
}

impl Code {
    fn build(spec: &CodeSpec, design: BlockDesign) -> Result<Self> {
        let field = BinaryField::new(spec.width)?;
        if spec.m == spec.n.saturating_sub(spec.k) {
            let params = SystemParams {
                n: spec.n,
                k: spec.k,
                d: spec.d,
                e: spec.e,
                m: spec.m,
                r: spec.r,
                t: spec.t,
            };
            return Ok(Code::Layered(LayeredCode::build(params, design, &field)?));
        }
        if spec.t != spec.r || design != BlockDesign::complete(spec.n, spec.r)? {
            return Err(Error::params(
                "the precoded construction uses the complete (t = r) design",
            ));
        }
        let params = PrecodedParams {
            n: spec.n,
            k: spec.k,
            d: spec.d,
            e: spec.e,
            m: spec.m,
            r: spec.r,
        };
        Ok(Code::Precoded(PrecodedCode::new(params, &field)?))
    }

    fn field(&self) -> &BinaryField {
        match self {
            Code::Layered(c) => c.field(),
            Code::Precoded(c) => c.inner().field(),
        }
    }

    fn kappa(&self) -> usize {
        match self {
            Code::Layered(_) => 1,
            Code::Precoded(c) => c.kappa(),
        }
    }

    fn symbols(&self) -> usize {
        match self {
            Code::Layered(c) => c.data_len(),
            Code::Precoded(c) => c.info_len(),
        }
    }

    fn alpha(&self) -> usize {
        match self {
            Code::Layered(c) => c.alpha(),
            Code::Precoded(c) => c.inner().alpha(),
        }
    }

    fn design(&self) -> &BlockDesign {
        match self {
            Code::Layered(c) => c.design(),
            Code::Precoded(c) => c.inner().design(),
        }
    }

    fn bytes_per_coord(&self) -> usize {
        (self.field().width() as usize).div_ceil(8)
    }

    fn capacity_bytes(&self) -> usize {
        self.symbols() * self.kappa() * self.bytes_per_coord()
    }

    fn to_coords(&self, bytes: &[u8]) -> Result<Vec<Elem>> {
        let cap = self.capacity_bytes();
        if bytes.len() > cap {
            return Err(Error::params(format!(
                "data has {} bytes, the code holds {cap}",
                bytes.len()
            )));
        }
        let mut padded = bytes.to_vec();
        padded.resize(cap, 0);
        let field = self.field();
        padded
            .chunks(self.bytes_per_coord())
            .map(|chunk| {
                let v = chunk.iter().fold(0u32, |acc, &b| acc << 8 | b as u32);
                let e = Elem(v as u16);
                if v > u16::MAX as u32 || !field.contains(e) {
                    return Err(Error::Field(format!("data value {v:#x} is not in {field:?}")));
                }
                Ok(e)
            })
            .collect()
    }

    fn to_bytes(&self, coords: &[Elem]) -> Vec<u8> {
        let bpc = self.bytes_per_coord();
        coords
            .iter()
            .flat_map(|c| c.0.to_be_bytes()[2 - bpc..].to_vec())
            .collect()
    }

    fn encode(&self, coords: &[Elem]) -> Result<Vec<NodeFile>> {
        match self {
            Code::Layered(c) => Ok(c.encode(coords)?.iter().map(NodeFile::from_layered).collect()),
            Code::Precoded(c) => {
                let data: Vec<Vec<Elem>> = coords.chunks(c.kappa()).map(<[Elem]>::to_vec).collect();
                Ok(c
                    .encode2(&data)?
                    .iter()
                    .map(|nc| NodeFile::from_precoded(nc, c.kappa()))
                    .collect())
            }
        }
    }

    fn check_kind(&self, file: &NodeFile) -> Result<()> {
        let precoded = matches!(self, Code::Precoded(p) if p.is_precoded());
        if file.precoded != precoded || file.kappa != self.kappa() {
            return Err(Error::params(format!(
                "node {} file does not match the code (precoded={}, kappa={})",
                file.node, precoded, self.kappa()
            )));
        }
        Ok(())
    }

    fn reconstruct(&self, files: &[NodeFile]) -> Result<Vec<Elem>> {
        files.iter().try_for_each(|f| self.check_kind(f))?;
        match self {
            Code::Layered(c) => {
                let nodes = files.iter().map(NodeFile::to_layered).collect::<Result<Vec<_>>>()?;
                c.reconstruct(&nodes)
            }
            Code::Precoded(c) => {
                let nodes: Vec<_> = files.iter().map(NodeFile::to_precoded).collect();
                Ok(c.reconstruct2(&nodes)?.concat())
            }
        }
    }

    fn repair(
        &self,
        files: &[NodeFile],
        failed: &BTreeSet<NodeId>,
        helpers: &BTreeSet<NodeId>,
    ) -> Result<(Vec<NodeFile>, RepairAccounting)> {
        files.iter().try_for_each(|f| self.check_kind(f))?;
        match self {
            Code::Layered(c) => {
                let nodes = files.iter().map(NodeFile::to_layered).collect::<Result<Vec<_>>>()?;
                let outcome = c.repair(&nodes, failed, helpers)?;
                let files = outcome.repaired.iter().map(NodeFile::from_layered).collect();
                Ok((files, outcome.accounting))
            }
            Code::Precoded(c) => {
                let nodes: Vec<_> = files.iter().map(NodeFile::to_precoded).collect();
                let (repaired, accounting) = c.repair2(&nodes, failed, helpers)?;
                let files = repaired
                    .iter()
                    .map(|nc| NodeFile::from_precoded(nc, c.kappa()))
                    .collect();
                Ok((files, accounting))
            }
        }
    }
}

fn load_code(dir: &Path) -> Result<(CodeSpec, Code)> {
    let spec: CodeSpec = serde_json::from_slice(&read(&dir.join("code.json"))?)?;
    let design = BlockDesign::parse(&read_text(&dir.join("design.txt"))?)?;
    let code = Code::build(&spec, design)?;
    if code.symbols() != spec.symbols || code.kappa() != spec.kappa {
        return Err(Error::params("code.json does not match the rebuilt code"));
    }
    Ok((spec, code))
}

fn load_nodes(dir: &Path, code: &Code, ids: &BTreeSet<NodeId>) -> Result<Vec<NodeFile>> {
    ids.iter()
        .map(|&id| {
            let file = NodeFile::parse(&read_text(&node_path(dir, id))?, code.field())?;
            if file.node != id {
                return Err(Error::params(format!(
                    "node_{id}.txt holds node {}",
                    file.node
                )));
            }
            Ok(file)
        })
        .collect()
}

fn write_code_dir(
    outputs: &mut Outputs,
    spec: &CodeSpec,
    code: &Code,
    files: &[NodeFile],
) -> Result<()> {
    outputs.write("code.json", &json_bytes(spec)?)?;
    outputs.write("design.txt", code.design().to_text().as_bytes())?;
    for f in files {
        outputs.write(&format!("node_{}.txt", f.node), f.render(code.field()).as_bytes())?;
    }
    Ok(())
}

fn random_bytes(code: &Code, coords: usize, seed: u64) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = code.field();
    let values: Vec<Elem> = (0..coords)
        .map(|_| field.elem(rng.gen_range(0..field.order())))
        .collect();
    code.to_bytes(&values)
}

// ------------------------------------------------------------------ encode

#[derive(Debug, Serialize)]
struct EncodeReport {
    dir: String,
    n: u32,
    precoded: bool,
    kappa: usize,
    symbols: usize,
    alpha: usize,
    data_bytes: usize,
    capacity_bytes: usize,
}

fn cmd_encode(a: &EncodeArgs, out: Option<&Path>) -> Result<()> {
    let dir = require_out(out, "encode")?;
    let c = &a.code;
    let m = c.m.unwrap_or(c.n.saturating_sub(c.k));
    let t = c.t.unwrap_or(c.r);
    let design = load_or_generate(c.n, c.r, Some(t), c.design.as_deref())?;
    let mut spec = CodeSpec {
        version: VERSION.to_string(),
        width: c.width,
        n: c.n,
        k: c.k,
        d: c.d,
        e: c.e,
        m,
        r: c.r,
        t,
        precoded: false,
        kappa: 1,
        symbols: 0,
        data_bytes: 0,
    };
    let code = Code::build(&spec, design)?;
    spec.precoded = matches!(&code, Code::Precoded(p) if p.is_precoded());
    spec.kappa = code.kappa();
    spec.symbols = code.symbols();

    let mut outputs = Outputs::new(dir);
    let mut inputs: Vec<String> = c.design.iter().map(|p| display(p)).collect();
    let bytes = match &a.data {
        Some(path) => {
            inputs.push(display(path));
            read(path)?
        }
        None => {
            let bytes = random_bytes(&code, code.symbols() * code.kappa(), a.seed);
            outputs.write("data.bin", &bytes)?;
            bytes
        }
    };
    spec.data_bytes = bytes.len();
    let files = code.encode(&code.to_coords(&bytes)?)?;
    write_code_dir(&mut outputs, &spec, &code, &files)?;
    outputs.finish("encode", a, inputs, a.data.is_none().then_some(a.seed))?;
    print(&json_bytes(&EncodeReport {
        dir: display(dir),
        n: spec.n,
        precoded: spec.precoded,
        kappa: spec.kappa,
        symbols: spec.symbols,
        alpha: code.alpha(),
        data_bytes: spec.data_bytes,
        capacity_bytes: code.capacity_bytes(),
    })?)
}

// ------------------------------------------------------------------ repair

#[derive(Debug, Serialize)]
struct RepairReport {
    failed: Vec<NodeId>,
    helpers: Vec<NodeId>,
    coverage: Coverage,
    msmr: ReportJson,
    naive: ReportJson,
    layered_naive: ReportJson,
    written: Vec<String>,
    /// For each repaired node whose old file was present in the output
    /// directory: whether the repaired contents are identical.
    matches_previous: BTreeMap<String, bool>,
}

fn cmd_repair(a: &RepairArgs, out: Option<&Path>) -> Result<()> {
    let (spec, code) = load_code(&a.dir)?;
    let failed: BTreeSet<NodeId> = a.failed.iter().copied().collect();
    if failed.len() != a.failed.len() {
        return Err(Error::params("duplicate failed node ids"));
    }
    let helpers: BTreeSet<NodeId> = match &a.helpers {
        Some(h) => {
            let set: BTreeSet<NodeId> = h.iter().copied().collect();
            if set.len() != h.len() {
                return Err(Error::params("duplicate helper ids"));
            }
            set
        }
        None => (1..=spec.n)
            .filter(|x| !failed.contains(x))
            .take(spec.d as usize)
            .collect(),
    };
    if let Some(x) = failed.intersection(&helpers).next() {
        return Err(Error::params(format!("node {x} is both failed and a helper")));
    }
    let files = load_nodes(&a.dir, &code, &helpers)?;
    let (repaired, accounting) = code.repair(&files, &failed, &helpers)?;

    let dir = out.unwrap_or(&a.dir);
    let mut matches_previous = BTreeMap::new();
    let mut outputs = Outputs::new(dir);
    for f in &repaired {
        let text = f.render(code.field());
        if let Ok(old) = fs::read_to_string(node_path(dir, f.node)) {
            matches_previous.insert(f.node.to_string(), old == text);
        }
        outputs.write(&format!("node_{}.txt", f.node), text.as_bytes())?;
    }
    let report = RepairReport {
        failed: failed.iter().copied().collect(),
        helpers: helpers.iter().copied().collect(),
        coverage: accounting.coverage,
        msmr: accounting.msmr.to_json(),
        naive: accounting.naive.to_json(),
        layered_naive: accounting.layered_naive.to_json(),
        written: outputs.written.clone(),
        matches_previous,
    };
    let bytes = json_bytes(&report)?;
    outputs.write("repair.json", &bytes)?;
    let inputs = helpers
        .iter()
        .map(|&h| display(&node_path(&a.dir, h)))
        .collect();
    outputs.finish("repair", a, inputs, None)?;
    print(&bytes)
}

// ------------------------------------------------------------- reconstruct

#[derive(Debug, Serialize)]
struct ReconstructReport {
    nodes: Vec<NodeId>,
    output: String,
    bytes: usize,
}

fn cmd_reconstruct(a: &ReconstructArgs, out: Option<&Path>) -> Result<()> {
    let (spec, code) = load_code(&a.dir)?;
    let ids: BTreeSet<NodeId> = match &a.nodes {
        Some(list) => {
            let set: BTreeSet<NodeId> = list.iter().copied().collect();
            if set.len() != list.len() {
                return Err(Error::params("duplicate node ids"));
            }
            set
        }
        None => (1..=spec.k).collect(),
    };
    let files = load_nodes(&a.dir, &code, &ids)?;
    let coords = code.reconstruct(&files)?;
    let mut bytes = code.to_bytes(&coords);
    bytes.truncate(spec.data_bytes);

    let dir = out.unwrap_or(&a.dir);
    let path = a
        .output
        .clone()
        .unwrap_or_else(|| dir.join("reconstructed.bin"));
    write_atomic(&path, &bytes)?;
    let report = ReconstructReport {
        nodes: ids.iter().copied().collect(),
        output: display(&path),
        bytes: bytes.len(),
    };
    if out.is_some() {
        let outputs = Outputs::new(dir);
        let inputs = ids.iter().map(|&x| display(&node_path(&a.dir, x))).collect();
        outputs.finish("reconstruct", a, inputs, None)?;
    }
    print(&json_bytes(&report)?)
}

// ------------------------------------------------------------------ extend

#[derive(Debug, Serialize)]
struct ExtendReport {
    dir: String,
    n: u32,
    k: u32,
    d: u32,
    e: u32,
    r: u32,
    blocks: usize,
    alpha: usize,
    symbols: usize,
    new_block: Vec<NodeId>,
}

fn cmd_extend(a: &ExtendArgs, out: Option<&Path>) -> Result<()> {
    let dir = require_out(out, "extend")?;
    let (spec, code) = load_code(&a.dir)?;
    let Code::Layered(old) = &code else {
        return Err(Error::params("only layered (non-precoded) codes can be extended"));
    };
    let extended = old.extend()?;
    let all: BTreeSet<NodeId> = (1..=spec.n).collect();
    let state = load_nodes(&a.dir, &code, &all)?
        .iter()
        .map(NodeFile::to_layered)
        .collect::<Result<Vec<_>>>()?;
    let fresh_len = extended.params().group_dimension();
    let new_code = Code::Layered(extended.clone());
    let mut inputs: Vec<String> = all.iter().map(|&x| display(&node_path(&a.dir, x))).collect();
    let mut outputs = Outputs::new(dir);
    let bytes = match &a.data {
        Some(path) => {
            inputs.push(display(path));
            read(path)?
        }
        None => {
            let bytes = random_bytes(&new_code, fresh_len, a.seed);
            outputs.write("extension-data.bin", &bytes)?;
            bytes
        }
    };
    let bpc = new_code.bytes_per_coord();
    if bytes.len() > fresh_len * bpc {
        return Err(Error::params(format!(
            "extension data has {} bytes, the new block holds {}",
            bytes.len(),
            fresh_len * bpc
        )));
    }
    let mut padded = bytes.clone();
    padded.resize(fresh_len * bpc, 0);
    // Reuse the code-level byte conversion on a one-block buffer.
    let fresh: Vec<Elem> = padded
        .chunks(bpc)
        .map(|c| Elem(c.iter().fold(0u16, |acc, &b| acc << 8 | b as u16)))
        .collect();
    if let Some(bad) = fresh.iter().find(|&&v| !new_code.field().contains(v)) {
        return Err(Error::Field(format!("data value {bad:?} is not in the field")));
    }
    let contents = old.extend_contents(&extended, &state, &fresh)?;
    let p = *extended.params();
    let new_spec = CodeSpec {
        version: VERSION.to_string(),
        width: spec.width,
        n: p.n,
        k: p.k,
        d: p.d,
        e: p.e,
        m: p.m,
        r: p.r,
        t: p.t,
        precoded: false,
        kappa: 1,
        symbols: extended.data_len(),
        data_bytes: extended.data_len() * bpc,
    };
    let files: Vec<NodeFile> = contents.iter().map(NodeFile::from_layered).collect();
    write_code_dir(&mut outputs, &new_spec, &new_code, &files)?;
    outputs.finish("extend", a, inputs, a.data.is_none().then_some(a.seed))?;
    print(&json_bytes(&ExtendReport {
        dir: display(dir),
        n: p.n,
        k: p.k,
        d: p.d,
        e: p.e,
        r: p.r,
        blocks: extended.design().num_blocks(),
        alpha: extended.alpha(),
        symbols: extended.data_len(),
        new_block: extended.design().blocks().last().cloned().unwrap_or_default(),
    })?)
}

// ---------------------------------------------------------------- analysis

#[derive(Debug, Serialize)]
struct PointJson {
    label: String,
    r: Option<u32>,
    m: Option<u32>,
    alpha_bar: RationalJson,
    beta_bar: RationalJson,
    is_corner: bool,
}

impl PointJson {
    fn new(p: &TradeoffPoint, is_corner: bool) -> Self {
        PointJson {
            label: p.label.name().to_string(),
            r: p.label.r(),
            m: p.label.m(),
            alpha_bar: (&p.alpha_bar).into(),
            beta_bar: (&p.beta_bar).into(),
            is_corner,
        }
    }
}

fn csv_bytes<R: Serialize>(rows: &[R]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_rows(&mut buf, rows)?;
    Ok(buf)
}

/// Print the chosen format and, with an output directory, write both.
fn emit<P: Serialize>(
    command: &str,
    params: &P,
    format: Format,
    csv: Vec<u8>,
    json: Vec<u8>,
    out: Option<&Path>,
) -> Result<()> {
    if let Some(dir) = out {
        let mut outputs = Outputs::new(dir);
        outputs.write(&format!("{command}.csv"), &csv)?;
        outputs.write(&format!("{command}.json"), &json)?;
        outputs.finish(command, params, Vec::new(), None)?;
    }
    print(match format {
        Format::Csv => &csv,
        Format::Json => &json,
    })
}

#[derive(Debug, Serialize)]
struct RegionReport {
    k: u32,
    e: u32,
    p_star: u32,
    n_corners: u32,
    points: Vec<PointJson>,
}

fn cmd_region(a: &RegionArgs, out: Option<&Path>) -> Result<()> {
    let region = corner_points(a.k, a.e)?;
    let mut points: Vec<TradeoffPoint> = vec![extreme_points(a.k, a.k, a.e)?.1];
    points.extend(achievable_points_c1(a.k, a.e)?.into_iter().rev().map(|c| c.point));
    let corner = |p: &TradeoffPoint| {
        region
            .corner_points
            .iter()
            .any(|c| c.same_coords(p) && c.label == p.label)
    };
    let rows: Vec<PointRow> = points.iter().map(|p| PointRow::new(p, corner(p))).collect();
    let report = RegionReport {
        k: a.k,
        e: a.e,
        p_star: region.p_star,
        n_corners: region.n_corners,
        points: points.iter().map(|p| PointJson::new(p, corner(p))).collect(),
    };
    emit("region", a, a.format, csv_bytes(&rows)?, json_bytes(&report)?, out)
}

#[derive(Debug, Serialize)]
struct PointsReport {
    n: u32,
    k: u32,
    d: u32,
    e: u32,
    points: Vec<PointJson>,
}

fn cmd_points(a: &PointsArgs, out: Option<&Path>) -> Result<()> {
    let mut points: Vec<TradeoffPoint> = Vec::new();
    if a.e < a.k {
        let (msmr, mbcr) = extreme_points(a.k, a.d, a.e)?;
        points.push(msmr);
        points.push(mbcr);
    }
    points.extend(
        achievable_points_general(a.n, a.k, a.d, a.e)?
            .into_iter()
            .map(|c| c.point),
    );
    points.extend(
        achievable_points_layered(a.n, a.d, a.e, a.n - a.k)?
            .into_iter()
            .map(|c| c.point),
    );
    let rows = point_rows(&points);
    let report = PointsReport {
        n: a.n,
        k: a.k,
        d: a.d,
        e: a.e,
        points: points
            .iter()
            .zip(&rows)
            .map(|(p, row)| PointJson::new(p, row.is_corner))
            .collect(),
    };
    emit("points", a, a.format, csv_bytes(&rows)?, json_bytes(&report)?, out)
}

#[derive(Debug, Serialize)]
struct CompareReport {
    n: u32,
    k: u32,
    d: u32,
    e: u32,
    rows: Vec<ModeRow>,
}

fn cmd_compare(a: &CompareArgs, out: Option<&Path>) -> Result<()> {
    let rows: Vec<ModeRow> = accounting_curves(a.n, a.k, a.d, a.e)?
        .iter()
        .map(ModeRow::from)
        .collect();
    let csv = csv_bytes(&rows)?;
    let report = CompareReport {
        n: a.n,
        k: a.k,
        d: a.d,
        e: a.e,
        rows,
    };
    emit("compare", a, a.format, csv, json_bytes(&report)?, out)
}

// ------------------------------------------------------------------ verify

fn cmd_verify(a: &VerifyArgs, out: Option<&Path>) -> Result<()> {
    let outcomes = verify::run_all(a.seed);
    let mut text = String::new();
    for o in &outcomes {
        let status = if o.passed { "PASS" } else { "FAIL" };
        text.push_str(&format!(
            "{status} {} ({} cases, {} ms){}\n",
            o.name,
            o.cases,
            o.millis,
            if o.detail.is_empty() {
                String::new()
            } else {
                format!(": {}", o.detail)
            }
        ));
    }
    print(text.as_bytes())?;
    if let Some(dir) = out {
        let mut outputs = Outputs::new(dir);
        outputs.write("verify.json", &json_bytes(&outcomes)?)?;
        outputs.finish("verify", a, Vec::new(), Some(a.seed))?;
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    if failed > 0 {
        return Err(Error::Invariant(format!("{failed} oracle suite(s) failed")));
    }
    Ok(())
}
