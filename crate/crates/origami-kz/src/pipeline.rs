//! The end-to-end certification pipeline behind the CLI: stage
//! execution, JSON reports, the stage cache, and certificate
//! re-verification.
//!
//! Stage order for a full run: stratum, orbit, Veech group, homology,
//! Kontsevich-Zorich matrices, pinching/density, arithmeticity
//! (unipotent search, root groups, kernel witness), ping-pong. Reports
//! carry no timestamps and serialize with fixed field order, so a run
//! is byte-deterministic for a fixed configuration.
//!
//! Exit-code contract: 0 = every attempted stage certified (skipped
//! stages are reported but harmless), 2 = some stage honestly failed to
//! certify within its bounds, 1 = operational error.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::arithmeticity::{
    arithmeticity_verdict, density_certificate, kernel_relation_check, root_group_certificate,
    unipotent_search, ArithError, ArithmeticityVerdict, DensityOutcome, KernelWitness,
    UnipotentCertificate,
};
use crate::fixtures;
use crate::homology::{
    absolute_basis, face_relations, homological_dimension, intersection_form, pairing,
    HomologyBasis, HomologyError,
};
use crate::kz::{elementary_map, express_in_bases, monodromy, AffineWord, KzError, MonodromyMatrix};
use crate::linalg::{IMat, Mat2};
use crate::orbit::{OrbitError, OrbitGraph, VeechGroupData, Word};
use crate::origami::{Generator, Origami, OrigamiError};
use crate::pingpong::{
    membership_normal_form, verify_pingpong, FreeProductCertificate, Membership, PingPongError,
    TwoGenWord,
};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Origami(#[from] OrigamiError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Kz(#[from] KzError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    PingPong(#[from] PingPongError),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid report json: {0}")]
    BadReport(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
}

/// Pipeline stages addressable from the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Stratum,
    Orbit,
    Veech,
    Homology,
    Kz,
    Pinching,
    Arithmeticity,
    Pingpong,
    Verify,
}

impl Stage {
    pub const NAMES: [&'static str; 9] = [
        "stratum",
        "orbit",
        "veech",
        "homology",
        "kz",
        "pinching",
        "arithmeticity",
        "pingpong",
        "verify",
    ];

    pub fn parse(name: &str) -> Option<Stage> {
        Some(match name {
            "stratum" => Stage::Stratum,
            "orbit" => Stage::Orbit,
            "veech" => Stage::Veech,
            "homology" => Stage::Homology,
            "kz" => Stage::Kz,
            "pinching" => Stage::Pinching,
            "arithmeticity" => Stage::Arithmeticity,
            "pingpong" => Stage::Pingpong,
            "verify" => Stage::Verify,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Text,
    Json,
}

/// Run configuration assembled by the CLI.
#[derive(Clone, Debug)]
pub struct RunConfig {
    /// Path to an origami file (or report file for `verify`), or inline
    /// origami text.
    pub input: String,
    pub stage: Option<Stage>,
    pub max_syllables: usize,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    pub workers: usize,
}

/// Per-stage outcome for the status table and the exit code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageStatus {
    pub stage: String,
    /// `certified`, `not-certified`, or `skipped`.
    pub status: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub tool: String,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputInfo {
    pub origami: String,
    pub n: usize,
    pub canonical: String,
    pub hash: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumStage {
    pub commutator: String,
    pub zero_orders: Vec<usize>,
    pub genus: usize,
    pub stratum: String,
    pub horizontal_cylinders: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitStage {
    pub node_count: usize,
    pub cusp_count: usize,
    pub cusps: Vec<Vec<usize>>,
    pub graph: OrbitGraph,
    pub dot: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VeechStage {
    pub index: usize,
    pub cusp_count: usize,
    pub data: VeechGroupData,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyStage {
    pub face_rank: usize,
    pub basis_source: String,
    pub basis: HomologyBasis,
    pub omega_full: IMat,
    pub omega_zero: IMat,
    pub homological_dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorMonodromy {
    pub word: String,
    pub monodromy: MonodromyMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KzStage {
    pub basis_source: String,
    /// Elementary maps in the chosen bases, labelled `g@node`.
    pub transitions: Vec<(String, IMat)>,
    pub generators: Vec<GeneratorMonodromy>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PinchingStage {
    pub candidates: Vec<String>,
    pub outcome: DensityOutcome,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArithmeticityStage {
    pub theta: IMat,
    pub conjugated_a: IMat,
    pub conjugated_b: IMat,
    pub theta_omega_theta: IMat,
    pub search_bound: usize,
    pub search_hits: usize,
    pub unipotent: UnipotentCertificate,
    pub kernel_witness: KernelWitness,
    pub verdict: ArithmeticityVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchreierMembership {
    pub word: String,
    pub matrix: Mat2,
    pub ab_word: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PingPongStage {
    pub certificate: FreeProductCertificate,
    pub schreier_membership: Vec<SchreierMembership>,
    pub generators_lie_in_ab: bool,
}

/// The complete, self-contained run report; `verify` re-checks one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub meta: Meta,
    pub input: InputInfo,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stratum: Option<StratumStage>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbit: Option<OrbitStage>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub veech: Option<VeechStage>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub homology: Option<HomologyStage>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kz: Option<KzStage>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pinching: Option<PinchingStage>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub arithmeticity: Option<ArithmeticityStage>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pingpong: Option<PingPongStage>,
    pub statuses: Vec<StageStatus>,
    pub verdict: String,
}

pub fn canonical_hash(o: &Origami) -> String {
    let canon = o.canonical_form().0;
    let digest = Sha256::digest(canon.to_string().as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    hex[..16].to_string()
}

fn meta() -> Meta {
    Meta { tool: "origami-kz".into(), version: env!("CARGO_PKG_VERSION").into() }
}

/// Everything computed once and shared between stages; the homology
/// bases are built lazily since the orbit-level stages do not need
/// them.
struct Context {
    origami: Origami,
    graph: OrbitGraph,
    bases_cell: std::cell::OnceCell<(Vec<HomologyBasis>, String, bool)>,
}

impl Context {
    fn new(origami: Origami) -> Self {
        let graph = OrbitGraph::new(&origami);
        Context { origami, graph, bases_cell: std::cell::OnceCell::new() }
    }

    fn bases_entry(&self) -> &(Vec<HomologyBasis>, String, bool) {
        self.bases_cell.get_or_init(|| match fixtures::adapted_bases_on(&self.graph) {
            Some(b) => (b, "fixture".to_string(), true),
            None => (
                self.graph.nodes.iter().map(absolute_basis).collect(),
                "computed".to_string(),
                false,
            ),
        })
    }

    fn bases(&self) -> &[HomologyBasis] {
        &self.bases_entry().0
    }

    fn basis_source(&self) -> &str {
        &self.bases_entry().1
    }

    /// True when the orbit is the shipped four-node example.
    fn fixture_path(&self) -> bool {
        self.bases_entry().2
    }

    fn base_node(&self) -> &Origami {
        &self.graph.nodes[self.graph.base]
    }
}

fn stage_stratum(o: &Origami) -> StratumStage {
    let s = o.stratum();
    StratumStage {
        commutator: o.commutator().to_string(),
        zero_orders: s.zero_orders.clone(),
        genus: s.genus,
        stratum: s.to_string(),
        horizontal_cylinders: o
            .horizontal_cylinders()
            .iter()
            .map(|c| (c.width, c.height))
            .collect(),
    }
}

fn stage_orbit(ctx: &Context) -> OrbitStage {
    let cusps = ctx.graph.cusps();
    OrbitStage {
        node_count: ctx.graph.len(),
        cusp_count: cusps.len(),
        cusps,
        graph: ctx.graph.clone(),
        dot: ctx.graph.to_dot(),
    }
}

fn stage_veech(ctx: &Context) -> VeechStage {
    let data = ctx.graph.veech_group();
    VeechStage { index: data.index, cusp_count: data.cusp_count, data }
}

fn stage_homology(ctx: &Context) -> Result<HomologyStage, PipelineError> {
    let node = ctx.base_node();
    let basis = ctx.bases()[ctx.graph.base].clone();
    let omega_full = intersection_form(node, &basis.chains)?.matrix;
    let omega_zero = intersection_form(node, basis.zero_part())?.matrix;
    Ok(HomologyStage {
        face_rank: face_relations(node).rank(),
        basis_source: ctx.basis_source().to_string(),
        basis,
        omega_full,
        omega_zero,
        homological_dimension: homological_dimension(&ctx.graph),
    })
}

fn stage_kz(ctx: &Context) -> Result<KzStage, PipelineError> {
    let mut transitions = Vec::new();
    for node in 0..ctx.graph.len() {
        for g in Generator::ALL {
            let map = elementary_map(g, node, &ctx.graph);
            let m = express_in_bases(&map, &ctx.graph, ctx.bases())?;
            transitions.push((format!("{}@{}", g.letter(), node), m));
        }
    }
    let words: Vec<Word> = if ctx.fixture_path() {
        vec![fixtures::word_a(), fixtures::word_b()]
    } else {
        ctx.graph
            .veech_group()
            .schreier_generators
            .into_iter()
            .take(6)
            .map(|s| s.word)
            .collect()
    };
    let mut generators = Vec::new();
    for word in words {
        let w = AffineWord::at(word.clone(), ctx.graph.base);
        let m = monodromy(&w, &ctx.graph, ctx.bases())?;
        generators.push(GeneratorMonodromy { word: word.to_string(), monodromy: m });
    }
    Ok(KzStage { basis_source: ctx.basis_source().to_string(), transitions, generators })
}

fn stage_pinching(ctx: &Context) -> Result<PinchingStage, PipelineError> {
    let words: Vec<Word> = if ctx.fixture_path() {
        vec![fixtures::word_p1(), fixtures::word_p2()]
    } else {
        // fallback: Schreier generators and their short products
        let gens: Vec<Word> = ctx
            .graph
            .veech_group()
            .schreier_generators
            .into_iter()
            .map(|s| s.word)
            .collect();
        let mut out = gens.clone();
        for a in &gens {
            for b in &gens {
                out.push(a.concat(b).simplified());
            }
        }
        out.truncate(200);
        out
    };
    let candidates: Vec<AffineWord> = words
        .iter()
        .map(|w| AffineWord::at(w.clone(), ctx.graph.base))
        .collect();
    let outcome = density_certificate(&ctx.graph, ctx.bases(), &candidates)?;
    Ok(PinchingStage {
        candidates: words.iter().map(|w| w.to_string()).collect(),
        outcome,
    })
}

fn stage_arithmeticity(
    ctx: &Context,
    pinching: &PinchingStage,
    max_syllables: usize,
    workers: usize,
) -> Result<Option<ArithmeticityStage>, PipelineError> {
    if !ctx.fixture_path() {
        return Ok(None);
    }
    let DensityOutcome::Dense(density) = &pinching.outcome else {
        return Ok(None);
    };
    let base = ctx.graph.base;
    let rho = |w: Word| -> Result<IMat, PipelineError> {
        Ok(monodromy(&AffineWord::at(w, base), &ctx.graph, ctx.bases())?.zero_part)
    };
    let rho_a = rho(fixtures::word_a())?;
    let rho_b = rho(fixtures::word_b())?;
    let theta = fixtures::theta();
    let big_a = crate::kz::change_basis(&rho_a, &theta)?;
    let big_b = crate::kz::change_basis(&rho_b, &theta)?;
    let omega = intersection_form(ctx.base_node(), ctx.bases()[base].zero_part())?.matrix;
    let theta_omega_theta = theta.transpose().mul(&omega).mul(&theta);
    let p = fixtures::conjugator_p();

    let hits = parallel_unipotent_search(&big_a, &big_b, &p, max_syllables, workers)?;
    let (x, y, z) = fixtures::unipotent_words();
    let found = |w: &TwoGenWord| hits.iter().any(|(hw, _)| hw == w);
    if !(found(&x) && found(&y) && found(&z)) {
        return Ok(None);
    }
    let unipotent = root_group_certificate(&p, &big_a, &big_b, &x, &y, &z)?;
    let kernel_witness = kernel_relation_check(
        &fixtures::kernel_word_exponents(),
        &rho_a,
        &rho_b,
        fixtures::word_a().mat2(),
        fixtures::word_b().mat2(),
    );
    let verdict = arithmeticity_verdict(Some(density), Some(&unipotent));
    Ok(Some(ArithmeticityStage {
        theta,
        conjugated_a: big_a,
        conjugated_b: big_b,
        theta_omega_theta,
        search_bound: max_syllables,
        search_hits: hits.len(),
        unipotent,
        kernel_witness,
        verdict,
    }))
}

/// Split the word enumeration across `workers` threads (the merge
/// re-sorts by the enumeration index, so the result is identical to the
/// sequential order).
fn parallel_unipotent_search(
    a: &IMat,
    b: &IMat,
    p: &IMat,
    max_syllables: usize,
    workers: usize,
) -> Result<Vec<(TwoGenWord, IMat)>, ArithError> {
    if workers <= 1 {
        return unipotent_search(a, b, p, max_syllables);
    }
    // reuse the sequential path for validation of the preconditions
    let words = crate::arithmeticity::normal_forms(max_syllables);
    if !a.pow(3).is_identity() || !b.pow(3).is_identity() {
        return unipotent_search(a, b, p, max_syllables);
    }
    let e1 = IMat::identity(4).col(0);
    let chunk = words.len().div_ceil(workers);
    let mut indexed: Vec<(usize, TwoGenWord, IMat)> = std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for (c, slice) in words.chunks(chunk).enumerate() {
            let e1 = e1.clone();
            handles.push(scope.spawn(move || {
                let mut local = Vec::new();
                for (i, w) in slice.iter().enumerate() {
                    let mut m = IMat::identity(4);
                    for s in &w.0 {
                        let base = match s.gen {
                            crate::pingpong::AbGen::A => a,
                            crate::pingpong::AbGen::B => b,
                        };
                        m = m.mul(&base.pow(s.exp as i64));
                    }
                    let conj = p.mul(&m).mul(p);
                    if conj.col(0) == e1 {
                        local.push((c * chunk + i, w.clone(), conj));
                    }
                }
                local
            }));
        }
        handles.into_iter().flat_map(|h| h.join().expect("worker")).collect()
    });
    indexed.sort_by_key(|(i, _, _)| *i);
    Ok(indexed.into_iter().map(|(_, w, m)| (w, m)).collect())
}

fn stage_pingpong(ctx: &Context, veech: &VeechStage, max_syllables: usize) -> Result<Option<PingPongStage>, PipelineError> {
    if !ctx.fixture_path() {
        return Ok(None);
    }
    let cone_table = fixtures::pingpong_table();
    let table = cone_table.table()?;
    let certificate = verify_pingpong(cone_table.a, cone_table.b, &table)?;
    let mut schreier_membership = Vec::new();
    let mut all_in = true;
    for s in &veech.data.schreier_generators {
        let ab_word = match membership_normal_form(s.matrix, &certificate, max_syllables.max(32)) {
            Membership::Member(w) => Some(w.to_string()),
            Membership::NotMember { .. } => {
                all_in = false;
                None
            }
        };
        schreier_membership.push(SchreierMembership {
            word: s.word.to_string(),
            matrix: s.matrix,
            ab_word,
        });
    }
    Ok(Some(PingPongStage {
        certificate,
        schreier_membership,
        generators_lie_in_ab: all_in,
    }))
}

fn read_cached<T: serde::de::DeserializeOwned>(dir: &Path, hash: &str, stage: &str) -> Option<T> {
    let path = dir.join(hash).join(format!("{stage}.json"));
    let text = fs::read_to_string(path).ok()?;
    serde_json::from_str(&text).ok()
}

fn write_cache<T: Serialize>(dir: &Path, hash: &str, stage: &str, value: &T) {
    let subdir = dir.join(hash);
    if fs::create_dir_all(&subdir).is_err() {
        return;
    }
    let path = subdir.join(format!("{stage}.json"));
    if let Ok(text) = serde_json::to_string_pretty(value) {
        let _ = fs::write(path, text);
    }
}

fn cached_or<T, F>(cfg: &RunConfig, hash: &str, stage: &str, compute: F) -> Result<T, PipelineError>
where
    T: Serialize + serde::de::DeserializeOwned,
    F: FnOnce() -> Result<T, PipelineError>,
{
    if let Some(dir) = &cfg.cache_dir {
        if let Some(v) = read_cached::<T>(dir, hash, stage) {
            return Ok(v);
        }
    }
    let value = compute()?;
    if let Some(dir) = &cfg.cache_dir {
        write_cache(dir, hash, stage, &value);
    }
    Ok(value)
}

/// Run the pipeline up to (or only reporting) the requested stage.
/// Returns the report and the process exit code.
pub fn run(cfg: &RunConfig) -> Result<(Report, i32), PipelineError> {
    if cfg.stage == Some(Stage::Verify) {
        return cmd_verify(cfg);
    }
    let text = read_input(&cfg.input)?;
    let origami = Origami::parse(&text)?;
    let hash = canonical_hash(&origami);
    // a stratum-only run never needs the (possibly large) orbit closure
    if cfg.stage == Some(Stage::Stratum) {
        let s = cached_or(cfg, &hash, "stratum", || Ok(stage_stratum(&origami)))?;
        let report = Report {
            meta: meta(),
            input: InputInfo {
                origami: origami.to_string(),
                n: origami.n(),
                canonical: origami.canonical_form().0.to_string(),
                hash,
            },
            stratum: Some(s.clone()),
            orbit: None,
            veech: None,
            homology: None,
            kz: None,
            pinching: None,
            arithmeticity: None,
            pingpong: None,
            statuses: vec![StageStatus {
                stage: "stratum".into(),
                status: "certified".into(),
                detail: s.stratum,
            }],
            verdict: "all attempted stages certified".into(),
        };
        return Ok((report, 0));
    }
    let ctx = Context::new(origami);
    let mut report = Report {
        meta: meta(),
        input: InputInfo {
            origami: ctx.origami.to_string(),
            n: ctx.origami.n(),
            canonical: ctx.base_node().to_string(),
            hash: hash.clone(),
        },
        stratum: None,
        orbit: None,
        veech: None,
        homology: None,
        kz: None,
        pinching: None,
        arithmeticity: None,
        pingpong: None,
        statuses: Vec::new(),
        verdict: String::new(),
    };
    let push = |statuses: &mut Vec<StageStatus>, stage: &str, status: &str, detail: String| {
        statuses.push(StageStatus { stage: stage.into(), status: status.into(), detail });
    };

    let genus = ctx.origami.stratum().genus;
    let until = cfg.stage;
    let wants = |s: Stage| match until {
        None => true,
        Some(target) => stage_rank(s) <= stage_rank(target),
    };

    if wants(Stage::Stratum) {
        let s = cached_or(cfg, &hash, "stratum", || Ok(stage_stratum(&ctx.origami)))?;
        push(&mut report.statuses, "stratum", "certified", s.stratum.clone());
        report.stratum = Some(s);
    }
    if wants(Stage::Orbit) {
        let s = cached_or(cfg, &hash, "orbit", || Ok(stage_orbit(&ctx)))?;
        push(
            &mut report.statuses,
            "orbit",
            "certified",
            format!("{} nodes, {} cusp(s)", s.node_count, s.cusp_count),
        );
        report.orbit = Some(s);
    }
    let veech = if wants(Stage::Veech) {
        let s = cached_or(cfg, &hash, "veech", || Ok(stage_veech(&ctx)))?;
        push(
            &mut report.statuses,
            "veech",
            "certified",
            format!("index {}, {} Schreier generators", s.index, s.data.schreier_generators.len()),
        );
        report.veech = Some(s.clone());
        Some(s)
    } else {
        None
    };
    if wants(Stage::Homology) {
        let s = cached_or(cfg, &hash, "homology", || stage_homology(&ctx))?;
        push(
            &mut report.statuses,
            "homology",
            "certified",
            format!(
                "rank {} basis ({}), homological dimension {}",
                s.basis.rank(),
                s.basis_source,
                s.homological_dimension
            ),
        );
        report.homology = Some(s);
    }
    if wants(Stage::Kz) {
        let s = cached_or(cfg, &hash, "kz", || stage_kz(&ctx))?;
        push(
            &mut report.statuses,
            "kz",
            "certified",
            format!("{} transition matrices, {} generator monodromies", s.transitions.len(), s.generators.len()),
        );
        report.kz = Some(s);
    }
    let pinching = if wants(Stage::Pinching) {
        if genus < 2 {
            push(
                &mut report.statuses,
                "pinching",
                "skipped",
                "genus 1: the non-tautological part is trivial".into(),
            );
            None
        } else {
            let s = cached_or(cfg, &hash, "pinching", || stage_pinching(&ctx))?;
            match &s.outcome {
                DensityOutcome::Dense(_) => {
                    push(&mut report.statuses, "pinching", "certified", "Zariski dense".into())
                }
                DensityOutcome::NotCertified { reason, .. } => {
                    push(&mut report.statuses, "pinching", "not-certified", reason.clone())
                }
            }
            report.pinching = Some(s.clone());
            Some(s)
        }
    } else {
        None
    };
    if wants(Stage::Arithmeticity) {
        if genus < 2 {
            push(
                &mut report.statuses,
                "arithmeticity",
                "skipped",
                "genus 1: nothing to certify".into(),
            );
        } else if let Some(pinching) = &pinching {
            let key = format!("arithmeticity-{}", cfg.max_syllables);
            let s = cached_or(cfg, &hash, &key, || {
                stage_arithmeticity(&ctx, pinching, cfg.max_syllables, cfg.workers)
            })?;
            match s {
                Some(stage) => {
                    push(
                        &mut report.statuses,
                        "arithmeticity",
                        if stage.verdict.certified { "certified" } else { "not-certified" },
                        stage.verdict.verdict.clone(),
                    );
                    report.arithmeticity = Some(stage);
                }
                None => push(
                    &mut report.statuses,
                    "arithmeticity",
                    "not-certified",
                    "no unipotent root-group recipe applies at this bound".into(),
                ),
            }
        }
    }
    if wants(Stage::Pingpong) {
        if let Some(veech) = &veech {
            let key = format!("pingpong-{}", cfg.max_syllables.max(32));
            let s = cached_or(cfg, &hash, &key, || {
                stage_pingpong(&ctx, veech, cfg.max_syllables)
            })?;
            match s {
                Some(stage) => {
                    let ok = stage.generators_lie_in_ab;
                    push(
                        &mut report.statuses,
                        "pingpong",
                        if ok { "certified" } else { "not-certified" },
                        format!(
                            "{}; Schreier generators in <a,b>: {ok}",
                            stage.certificate.statement
                        ),
                    );
                    report.pingpong = Some(stage);
                }
                None => push(
                    &mut report.statuses,
                    "pingpong",
                    "skipped",
                    "no cone table is shipped for this Veech group".into(),
                ),
            }
        }
    }

    let failed = report.statuses.iter().any(|s| s.status == "not-certified");
    report.verdict = if failed {
        "not certified: some stage failed within its bounds".into()
    } else if let Some(arith) = &report.arithmeticity {
        arith.verdict.verdict.clone()
    } else {
        "all attempted stages certified".into()
    };
    let code = if failed { 2 } else { 0 };
    Ok((report, code))
}

fn stage_rank(s: Stage) -> usize {
    match s {
        Stage::Stratum => 0,
        Stage::Orbit => 1,
        Stage::Veech => 2,
        Stage::Homology => 3,
        Stage::Kz => 4,
        Stage::Pinching => 5,
        Stage::Arithmeticity => 6,
        Stage::Pingpong => 7,
        Stage::Verify => 8,
    }
}

fn read_input(input: &str) -> Result<String, PipelineError> {
    let path = Path::new(input);
    if path.exists() {
        fs::read_to_string(path).map_err(|source| PipelineError::Io {
            path: path.to_path_buf(),
            source,
        })
    } else {
        Ok(input.to_string())
    }
}

/// One named re-verification check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

/// Re-check a report file: everything is recomputed from the embedded
/// data except the word searches, whose found witnesses are re-verified
/// directly.
pub fn verify_report(report: &Report) -> Vec<Check> {
    let mut checks = Vec::new();
    let mut check = |name: &str, ok: bool, detail: String| {
        checks.push(Check { name: name.into(), ok, detail });
    };

    let origami = match Origami::parse(&report.input.origami) {
        Ok(o) => o,
        Err(e) => {
            check("input-parses", false, e.to_string());
            return checks;
        }
    };
    check("input-parses", true, String::new());
    check(
        "input-hash",
        canonical_hash(&origami) == report.input.hash,
        "canonical form hash matches".into(),
    );

    if let Some(s) = &report.stratum {
        let actual = origami.stratum();
        check(
            "stratum",
            actual.zero_orders == s.zero_orders
                && actual.genus == s.genus
                && origami.commutator().to_string() == s.commutator,
            format!("recomputed {actual}"),
        );
    }
    let graph = report.orbit.as_ref().map(|o| &o.graph);
    if let Some(orbit) = &report.orbit {
        let g = &orbit.graph;
        let mut ok = g.len() == orbit.node_count && orbit.cusps == g.cusps();
        // every edge must conjugate the raw image onto its target
        for (u, edges) in g.edges.iter().enumerate() {
            for (k, e) in edges.iter().enumerate() {
                let gen = [Generator::T, Generator::S, Generator::NegId][k];
                let raw = g.nodes[u].apply_generator(gen);
                ok &= raw.relabel(&e.relabel).map(|r| r == g.nodes[e.target]).unwrap_or(false);
            }
        }
        check("orbit-edges", ok, "edge relabellings replay exactly".into());
    }
    if let (Some(veech), Some(g)) = (&report.veech, graph) {
        let mut ok = veech.index == g.len();
        for s in &veech.data.schreier_generators {
            ok &= g.is_closed_at(&s.word, g.base);
            ok &= s.word.mat2() == s.matrix && s.matrix.det() == 1;
        }
        check("veech-schreier", ok, "witness words stabilize the base".into());
    }
    if let Some(h) = &report.homology {
        // the basis lives on the canonical base node, not the raw input
        match Origami::parse(&report.input.canonical) {
            Ok(node) => {
                let ok_basis = h.basis.validate(&node).is_ok();
                let omega = intersection_form(&node, &h.basis.chains).map(|f| f.matrix);
                let ok = ok_basis
                    && omega.as_ref() == Ok(&h.omega_full)
                    && intersection_form(&node, h.basis.zero_part())
                        .map(|f| f.matrix == h.omega_zero)
                        .unwrap_or(false)
                    && pairing(&node, &h.basis.chains[0], &h.basis.chains[1]) == node.n() as i64;
                check("homology-basis-and-form", ok, "basis invariants and Ω recomputed".into());
            }
            Err(e) => check("homology-basis-and-form", false, e.to_string()),
        }
    }
    if let (Some(kz), Some(g)) = (&report.kz, graph) {
        let bases: Option<Vec<HomologyBasis>> = match kz.basis_source.as_str() {
            "fixture" => fixtures::adapted_bases_on(g),
            _ => Some(g.nodes.iter().map(absolute_basis).collect()),
        };
        match bases {
            Some(bases) => {
                let mut ok = true;
                for gm in &kz.generators {
                    let word = Word::parse(&gm.word).ok();
                    let recomputed = word.and_then(|w| {
                        monodromy(&AffineWord::at(w, g.base), g, &bases).ok()
                    });
                    ok &= recomputed.as_ref() == Some(&gm.monodromy);
                }
                check("kz-monodromies", ok, "generator monodromies recomputed".into());
            }
            None => check("kz-monodromies", false, "bases unavailable".into()),
        }
    }
    if let Some(p) = &report.pinching {
        if let DensityOutcome::Dense(cert) = &p.outcome {
            let recheck = |c: &crate::arithmeticity::PinchingCertificate| {
                crate::arithmeticity::char_poly(&c.matrix)
                    .map(|cp| {
                        cp == c.char_poly && {
                            let (d1, d2) = crate::arithmeticity::discriminants(&cp);
                            d1 == num_bigint::BigInt::from(c.delta1.value)
                                && d2 == num_bigint::BigInt::from(c.delta2.value)
                        } && c.pinching
                    })
                    .unwrap_or(false)
            };
            let ok = recheck(&cert.first)
                && recheck(&cert.second)
                && crate::arithmeticity::splitting_disjoint(&cert.first, &cert.second);
            check("density-certificate", ok, "pinching and disjointness recomputed".into());
        }
    }
    if let Some(a) = &report.arithmeticity {
        let (x, y, z) = match (
            a.unipotent.words.iter().find(|(n, _)| n == "x"),
            a.unipotent.words.iter().find(|(n, _)| n == "y"),
            a.unipotent.words.iter().find(|(n, _)| n == "z"),
        ) {
            (Some((_, x)), Some((_, y)), Some((_, z))) => (x.clone(), y.clone(), z.clone()),
            _ => (TwoGenWord::default(), TwoGenWord::default(), TwoGenWord::default()),
        };
        let recomputed = root_group_certificate(
            &a.unipotent.conjugator,
            &a.conjugated_a,
            &a.conjugated_b,
            &x,
            &y,
            &z,
        );
        check(
            "unipotent-certificate",
            recomputed.as_ref().ok() == Some(&a.unipotent),
            "root-group certificate recomputed from the witness words".into(),
        );
        let kw = &a.kernel_witness;
        check(
            "kernel-witness",
            kw.is_witness && kw.rho_image.is_identity() && !kw.sl2_image.is_identity(),
            "kernel witness flags verified".into(),
        );
    }
    if let Some(pp) = &report.pingpong {
        let recomputed = verify_pingpong(pp.certificate.a, pp.certificate.b, &pp.certificate.table);
        let mut ok = recomputed.as_ref().ok() == Some(&pp.certificate);
        for m in &pp.schreier_membership {
            if let Some(word_text) = &m.ab_word {
                // replay the found word and compare matrices
                let parsed = parse_ab_word(word_text);
                match parsed {
                    Some(w) => ok &= w.eval_mat2(pp.certificate.a, pp.certificate.b) == m.matrix,
                    None => ok = false,
                }
            }
        }
        check("pingpong-certificate", ok, "inclusions and memberships recomputed".into());
    }
    checks
}

fn parse_ab_word(text: &str) -> Option<TwoGenWord> {
    use crate::pingpong::{AbGen, Syllable};
    if text == "1" {
        return Some(TwoGenWord::default());
    }
    let mut sylls = Vec::new();
    for tok in text.split_whitespace() {
        let mut chars = tok.chars();
        let gen = match chars.next()? {
            'a' => AbGen::A,
            'b' => AbGen::B,
            _ => return None,
        };
        let rest = chars.as_str();
        let exp = if rest.is_empty() {
            1
        } else {
            rest.strip_prefix('^')?.parse().ok()?
        };
        sylls.push(Syllable { gen, exp });
    }
    Some(TwoGenWord(sylls))
}

/// Verify-report wrapper for the CLI.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub meta: Meta,
    pub checks: Vec<Check>,
    pub ok: bool,
}

fn cmd_verify(cfg: &RunConfig) -> Result<(Report, i32), PipelineError> {
    let path = Path::new(&cfg.input);
    if !path.exists() {
        return Err(PipelineError::Usage(format!(
            "verify needs a report file produced by a previous run; `{}` does not exist \
             (run without --stage first and pass --out)",
            cfg.input
        )));
    }
    let text = fs::read_to_string(path).map_err(|source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let report: Report = serde_json::from_str(&text)?;
    let checks = verify_report(&report);
    let ok = checks.iter().all(|c| c.ok);
    // reuse the Report envelope: statuses carry the check results
    let mut out = report;
    out.statuses = checks
        .iter()
        .map(|c| StageStatus {
            stage: format!("verify:{}", c.name),
            status: if c.ok { "certified" } else { "not-certified" }.into(),
            detail: c.detail.clone(),
        })
        .collect();
    out.verdict = if ok {
        "verification passed: all embedded certificates re-check".into()
    } else {
        "verification FAILED: some embedded certificate does not re-check".into()
    };
    Ok((out, if ok { 0 } else { 2 }))
}

/// Human-readable rendering of a report.
pub fn render_text(report: &Report) -> String {
    use std::fmt::Write as _;
    let mut s = String::new();
    let _ = writeln!(s, "origami-kz {}", report.meta.version);
    let _ = writeln!(s, "input: {}", report.input.origami);
    let _ = writeln!(s, "canonical: {} (hash {})", report.input.canonical, report.input.hash);
    if let Some(st) = &report.stratum {
        let _ = writeln!(s, "stratum: {}  commutator {}", st.stratum, st.commutator);
        let _ = writeln!(s, "horizontal cylinders (width, height): {:?}", st.horizontal_cylinders);
    }
    if let Some(o) = &report.orbit {
        let _ = writeln!(s, "orbit: {} node(s), {} cusp(s) {:?}", o.node_count, o.cusp_count, o.cusps);
    }
    if let Some(v) = &report.veech {
        let _ = writeln!(s, "veech group: index {}", v.index);
        for g in &v.data.schreier_generators {
            let _ = writeln!(s, "  schreier {:?}  word {}", g.matrix, g.word);
        }
    }
    if let Some(h) = &report.homology {
        let _ = writeln!(s, "homology: rank {} ({} basis)", h.basis.rank(), h.basis_source);
        let _ = writeln!(s, "  omega on the non-tautological part: {:?}", h.omega_zero);
        let _ = writeln!(s, "  homological dimension: {}", h.homological_dimension);
    }
    if let Some(kz) = &report.kz {
        for g in &kz.generators {
            let _ = writeln!(s, "kz generator {}:", g.word);
            let _ = writeln!(s, "  taut {:?}", g.monodromy.taut);
            let _ = writeln!(s, "  rho  {:?}", g.monodromy.zero_part);
        }
    }
    if let Some(p) = &report.pinching {
        match &p.outcome {
            DensityOutcome::Dense(c) => {
                let _ = writeln!(s, "pinching: {}", c.verdict);
                for cert in [&c.first, &c.second] {
                    let _ = writeln!(
                        s,
                        "  word {}: χ = {}, Δ1 = {} {:?}, Δ2 = {} {:?}",
                        cert.word.as_deref().unwrap_or("?"),
                        cert.char_poly,
                        cert.delta1.value,
                        cert.delta1.factors,
                        cert.delta2.value,
                        cert.delta2.factors,
                    );
                }
            }
            DensityOutcome::NotCertified { reason, .. } => {
                let _ = writeln!(s, "pinching: not certified ({reason})");
            }
        }
    }
    if let Some(a) = &report.arithmeticity {
        let _ = writeln!(s, "arithmeticity: {}", a.verdict.verdict);
        let _ = writeln!(s, "  search bound {} syllables, {} hits", a.search_bound, a.search_hits);
        for (label, u) in &a.unipotent.unipotents {
            let _ = writeln!(s, "  {label} = {u:?}");
        }
        let _ = writeln!(
            s,
            "  kernel witness: rho(r) = Id: {}, sl2 image {:?}",
            a.kernel_witness.rho_image.is_identity(),
            a.kernel_witness.sl2_image
        );
    }
    if let Some(pp) = &report.pingpong {
        let _ = writeln!(s, "pingpong: {}", pp.certificate.statement);
        let _ = writeln!(s, "  schreier generators in <a,b>: {}", pp.generators_lie_in_ab);
        for m in &pp.schreier_membership {
            let _ = writeln!(
                s,
                "    {:?} = {}",
                m.matrix,
                m.ab_word.as_deref().unwrap_or("NOT A MEMBER")
            );
        }
    }
    let _ = writeln!(s, "--- stages ---");
    for st in &report.statuses {
        let _ = writeln!(s, "{:<24} {:<14} {}", st.stage, st.status, st.detail);
    }
    let _ = writeln!(s, "verdict: {}", report.verdict);
    s
}
