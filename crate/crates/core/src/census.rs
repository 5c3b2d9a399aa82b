//! The census pipeline: enumerate CTTs, canonize and certify each, group
//! them by isometry signature, name the classes, annotate and write the
//! output files; and the verifier that replays a written census.
//!
//! Files written into the output directory, for `k` = `o` (orientable) or
//! `n` (non-orientable):
//!
//! - `ctt_sigs_<k>.txt`: every enumerated CTT signature, by size then text.
//! - `census_<k>.tsv`: one line per manifold, columns as in [`TSV_COLUMNS`].
//! - `certification_<k>.txt`: per CTT the proto-canonical triangulation, the
//!   results of the five certification checks and the exact face tilts.
//! - `morphisms.txt`: covering pairs among all CTTs of the run.
//! - `summary.txt`: counts per size, observations, and a `FAILURES` section
//!   when some CTT could not be certified.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fs;
use std::io;
use std::path::Path;

use rayon::prelude::*;

use crate::canon::{canonical_data, CanonicalData, IsometrySignature, Regime};
use crate::enumerate::{enumerate_ctts, SearchConfig};
use crate::error::{Error, Result};
use crate::geometry::{certify, CanonizeOptions, CertificationReport};
use crate::homology::{first_homology, is_homology_link, AbelianGroup};
use crate::morphisms::{covering_pairs, CoveringPair};
use crate::signature::{automorphism_count, decode_signature, signature};
use crate::triangulation::Triangulation;

pub const TSV_COLUMNS: [&str; 12] = [
    "name",
    "n_tets",
    "orientable",
    "n_cusps",
    "ctt_sigs",
    "isometry_sig",
    "regime",
    "H1",
    "homology_link",
    "two_colorable",
    "hides_symmetries",
    "canonical_is_ctt",
];

/// Everything computed for a single CTT.
#[derive(Clone, Debug)]
pub struct CttAnalysis {
    pub signature: String,
    pub triangulation: Triangulation,
    pub data: CanonicalData,
    pub report: CertificationReport,
    pub two_colorable: bool,
    pub hides_symmetries: bool,
}

/// A CTT that could not be processed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub signature: String,
    pub error: String,
}

/// Canonizes, certifies and annotates one CTT.
pub fn analyze(sig: &str, opts: &CanonizeOptions) -> Result<CttAnalysis> {
    let t = decode_signature(sig)?;
    if !t.is_ctt() {
        return Err(Error::NotCtt);
    }
    let data = canonical_data(&t, opts)?;
    let proto = &data.canonized.triangulation;
    let report = certify(proto, data.canonized.shapes());
    let hides_symmetries = automorphism_count(&data.canonical)? > automorphism_count(&t)?;
    Ok(CttAnalysis {
        signature: sig.to_string(),
        two_colorable: t.is_two_colorable()?,
        triangulation: t,
        data,
        report,
        hides_symmetries,
    })
}

/// Analyzes every signature in parallel; results keep the input order.
pub fn analyze_all(sigs: &[String], opts: &CanonizeOptions) -> (Vec<CttAnalysis>, Vec<Failure>) {
    let results: Vec<(String, Result<CttAnalysis>)> = sigs.par_iter().map(|s| (s.clone(), analyze(s, opts))).collect();
    let mut ok = Vec::new();
    let mut failed = Vec::new();
    for (s, r) in results {
        match r {
            Ok(a) if a.report.passed() => ok.push(a),
            Ok(a) => {
                let bad: Vec<&str> = a.report.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
                failed.push(Failure {
                    signature: s,
                    error: format!("certification failed: {}", bad.join(",")),
                });
            }
            Err(e) => failed.push(Failure {
                signature: s,
                error: e.to_string(),
            }),
        }
    }
    (ok, failed)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusRecord {
    pub name: String,
    pub n_tets: usize,
    pub orientable: bool,
    pub n_cusps: usize,
    /// CTT signatures, lexicographically sorted; entry `k` is `name#k`.
    pub ctts: Vec<String>,
    pub isometry: IsometrySignature,
    pub h1: AbelianGroup,
    /// Only defined for orientable manifolds.
    pub homology_link: Option<bool>,
    pub two_colorable: Vec<bool>,
    pub hides_symmetries: Vec<bool>,
    /// The canonical decomposition is one of the CTTs.
    pub canonical_is_ctt: bool,
}

fn flags(v: &[bool]) -> String {
    v.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(";")
}

impl CensusRecord {
    pub fn ctt_name(&self, k: usize) -> String {
        format!("{}#{k}", self.name)
    }

    pub fn regime_name(&self) -> &'static str {
        match self.isometry.regime {
            Regime::Simplicial => "simplicial",
            Regime::Retriangulated => "retriangulated",
        }
    }

    pub fn tsv_line(&self) -> String {
        let link = match self.homology_link {
            Some(b) => b.to_string(),
            None => "-".to_string(),
        };
        [
            self.name.clone(),
            self.n_tets.to_string(),
            self.orientable.to_string(),
            self.n_cusps.to_string(),
            self.ctts.join(";"),
            self.isometry.to_string(),
            self.regime_name().to_string(),
            self.h1.to_string(),
            link,
            flags(&self.two_colorable),
            flags(&self.hides_symmetries),
            self.canonical_is_ctt.to_string(),
        ]
        .join("\t")
    }
}

/// Manifold name: `otet`/`ntet`, two-digit size, four-digit index.
pub fn manifold_name(orientable: bool, n_tets: usize, index: usize) -> String {
    let prefix = if orientable { "otet" } else { "ntet" };
    format!("{prefix}{n_tets:02}_{index:04}")
}

/// Whether `name` is a well-formed manifold name for the given size.
pub fn is_manifold_name(name: &str, orientable: bool, n_tets: usize) -> bool {
    let prefix = if orientable { "otet" } else { "ntet" };
    let Some(rest) = name.strip_prefix(prefix) else {
        return false;
    };
    let Some((size, index)) = rest.split_once('_') else {
        return false;
    };
    size.len() == 2
        && index.len() == 4
        && size.bytes().chain(index.bytes()).all(|b| b.is_ascii_digit())
        && size.parse() == Ok(n_tets)
}

fn build_record(name: String, members: &[&CttAnalysis]) -> Result<CensusRecord> {
    let first = members[0];
    let t = &first.triangulation;
    let orientable = t.is_orientable()?;
    let isometry = first.data.signature.clone();
    let canonical_is_ctt = isometry.regime == Regime::Simplicial
        && members
            .iter()
            .any(|a| signature(&a.triangulation).ok().as_deref() == Some(isometry.signature.as_str()));
    Ok(CensusRecord {
        name,
        n_tets: t.num_tets(),
        orientable,
        n_cusps: t.num_cusps()?,
        ctts: members.iter().map(|a| a.signature.clone()).collect(),
        isometry,
        h1: first_homology(t)?,
        homology_link: if orientable { Some(is_homology_link(t)?) } else { None },
        two_colorable: members.iter().map(|a| a.two_colorable).collect(),
        hides_symmetries: members.iter().map(|a| a.hides_symmetries).collect(),
        canonical_is_ctt,
    })
}

/// Groups analyzed CTTs into isometry classes and names them: CTTs sorted
/// within a class, classes of each size indexed in the order of their first
/// CTT's signature.
pub fn name_classes(analyses: &[CttAnalysis]) -> Result<Vec<CensusRecord>> {
    let mut classes: BTreeMap<&IsometrySignature, Vec<&CttAnalysis>> = BTreeMap::new();
    for a in analyses {
        classes.entry(&a.data.signature).or_default().push(a);
    }
    let mut by_size: BTreeMap<(bool, usize), Vec<Vec<&CttAnalysis>>> = BTreeMap::new();
    for (_, mut members) in classes {
        members.sort_by(|a, b| a.signature.cmp(&b.signature));
        let t = &members[0].triangulation;
        by_size
            .entry((t.is_orientable()?, t.num_tets()))
            .or_default()
            .push(members);
    }
    let mut records = Vec::new();
    for ((orientable, n), mut classes) in by_size {
        classes.sort_by(|a, b| a[0].signature.cmp(&b[0].signature));
        for (i, members) in classes.iter().enumerate() {
            records.push(build_record(manifold_name(orientable, n, i), members)?);
        }
    }
    records.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(records)
}

/// Groups and names CTT signatures; fails on the first CTT that cannot be
/// certified, naming it.
pub fn group_and_name(sigs: &[String], opts: &CanonizeOptions) -> std::result::Result<Vec<CensusRecord>, Failure> {
    let (ok, failed) = analyze_all(sigs, opts);
    if let Some(f) = failed.into_iter().next() {
        return Err(f);
    }
    name_classes(&ok).map_err(|e| Failure {
        signature: String::new(),
        error: e.to_string(),
    })
}

#[derive(Clone, Debug)]
pub struct CensusConfig {
    pub max_tets: usize,
    pub orientable: bool,
    pub non_orientable: bool,
    pub seed: u64,
}

impl CensusConfig {
    fn kinds(&self) -> Vec<bool> {
        let mut k = Vec::new();
        if self.orientable {
            k.push(true);
        }
        if self.non_orientable {
            k.push(false);
        }
        k
    }

    fn canonize_options(&self) -> CanonizeOptions {
        CanonizeOptions {
            seed: self.seed,
            ..CanonizeOptions::default()
        }
    }
}

/// Counts for one tetrahedron count.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SummaryRow {
    pub ctts: [Option<usize>; 2],
    pub manifolds: [Option<usize>; 2],
    pub homology_links: Option<usize>,
}

/// In-memory result of [`run_census`].
#[derive(Clone, Debug, Default)]
pub struct CensusSummary {
    /// Indexed by tetrahedron count; slot 0 of each pair is orientable.
    pub rows: BTreeMap<usize, SummaryRow>,
    pub records: Vec<CensusRecord>,
    pub morphisms: Vec<CoveringPair>,
    pub failures: Vec<Failure>,
}

fn kind_tag(orientable: bool) -> &'static str {
    if orientable {
        "o"
    } else {
        "n"
    }
}

fn cell(x: Option<usize>) -> String {
    x.map_or_else(|| "-".to_string(), |v| v.to_string())
}

impl CensusSummary {
    /// Homology links with an odd tetrahedron count (expected: none).
    pub fn odd_homology_links(&self) -> Vec<&CensusRecord> {
        self.records
            .iter()
            .filter(|r| r.homology_link == Some(true) && r.n_tets % 2 == 1)
            .collect()
    }

    pub fn summary_text(&self) -> String {
        let mut s = String::from("tets\tctt_o\tctt_n\tmanifolds_o\tmanifolds_n\thomology_links\n");
        for (n, r) in &self.rows {
            s += &format!(
                "{n}\t{}\t{}\t{}\t{}\t{}\n",
                cell(r.ctts[0]),
                cell(r.ctts[1]),
                cell(r.manifolds[0]),
                cell(r.manifolds[1]),
                cell(r.homology_links)
            );
        }
        let links = self.records.iter().filter(|r| r.homology_link == Some(true)).count();
        if self.rows.values().any(|r| r.homology_links.is_some()) {
            let odd = self.odd_homology_links();
            let verdict = if odd.is_empty() { "holds" } else { "fails" };
            s += &format!(
                "even tetrahedron count of homology links: {verdict} ({} of {links} odd)\n",
                odd.len()
            );
        }
        if !self.failures.is_empty() {
            s += "FAILURES\n";
            for f in &self.failures {
                s += &format!("{}\t{}\n", f.signature, f.error);
            }
        }
        s
    }
}

fn certification_block(name: &str, a: &CttAnalysis) -> String {
    let mut plain = a.data.canonized.triangulation.clone();
    plain.set_shapes(None);
    let proto = signature(&plain).unwrap_or_default();
    format!("ctt {name} {}\nproto {proto}\n{}", a.signature, a.report)
}

fn lines<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| format!("{x}\n")).collect()
}

/// Runs the census and writes its files into `outdir`.
pub fn run_census(cfg: &CensusConfig, outdir: &Path) -> io::Result<CensusSummary> {
    fs::create_dir_all(outdir)?;
    let opts = cfg.canonize_options();
    let mut summary = CensusSummary::default();
    for n in 1..=cfg.max_tets {
        summary.rows.insert(n, SummaryRow::default());
    }
    let mut named: Vec<(String, Triangulation)> = Vec::new();
    for orientable in cfg.kinds() {
        let slot = usize::from(!orientable);
        let tag = kind_tag(orientable);
        let sigs = enumerate_ctts(&SearchConfig::new(cfg.max_tets, orientable)).signatures;
        fs::write(outdir.join(format!("ctt_sigs_{tag}.txt")), lines(&sigs))?;
        let (ok, mut failed) = analyze_all(&sigs, &opts);
        let records = name_classes(&ok).unwrap_or_else(|e| {
            failed.push(Failure {
                signature: "*".into(),
                error: e.to_string(),
            });
            Vec::new()
        });
        let by_sig: HashMap<&str, &CttAnalysis> = ok.iter().map(|a| (a.signature.as_str(), a)).collect();
        // The header is omitted for an empty census so that all its files
        // are empty.
        let mut log = if records.is_empty() {
            String::new()
        } else {
            format!("seed {}\n", cfg.seed)
        };
        for r in &records {
            for (k, s) in r.ctts.iter().enumerate() {
                log += &certification_block(&r.ctt_name(k), by_sig[s.as_str()]);
                named.push((r.ctt_name(k), by_sig[s.as_str()].triangulation.clone()));
            }
        }
        fs::write(outdir.join(format!("certification_{tag}.txt")), log)?;
        fs::write(
            outdir.join(format!("census_{tag}.tsv")),
            lines(records.iter().map(CensusRecord::tsv_line)),
        )?;
        for (n, row) in summary.rows.iter_mut() {
            row.ctts[slot] = Some(sigs.iter().filter(|s| s.starts_with(&format!("{n}."))).count());
            row.manifolds[slot] = Some(records.iter().filter(|r| r.n_tets == *n).count());
            if orientable {
                row.homology_links = Some(
                    records
                        .iter()
                        .filter(|r| r.n_tets == *n && r.homology_link == Some(true))
                        .count(),
                );
            }
        }
        summary.records.extend(records);
        summary.failures.extend(failed);
    }
    summary.morphisms = covering_pairs(&named);
    fs::write(outdir.join("morphisms.txt"), lines(&summary.morphisms))?;
    fs::write(outdir.join("summary.txt"), summary.summary_text())?;
    Ok(summary)
}

/// One line of a verification report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyEntry {
    pub subject: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub entries: Vec<VerifyEntry>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    fn push(&mut self, subject: impl Into<String>, problems: Vec<String>) {
        self.entries.push(VerifyEntry {
            subject: subject.into(),
            passed: problems.is_empty(),
            detail: problems.join("; "),
        });
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            let status = if e.passed { "pass" } else { "FAIL" };
            if e.detail.is_empty() {
                writeln!(f, "{status} {}", e.subject)?;
            } else {
                writeln!(f, "{status} {} {}", e.subject, e.detail)?;
            }
        }
        Ok(())
    }
}

fn read_lines(path: &Path) -> io::Result<Vec<String>> {
    Ok(fs::read_to_string(path)?.lines().map(str::to_string).collect())
}

/// Certification blocks of a log, by CTT name, and the seed in its header.
fn parse_log(text: &str) -> (u64, HashMap<String, String>) {
    let mut seed = 0;
    let mut blocks: HashMap<String, String> = HashMap::new();
    let mut current: Option<String> = None;
    for line in text.lines() {
        if let Some(s) = line.strip_prefix("seed ") {
            seed = s.trim().parse().unwrap_or(0);
        } else if let Some(rest) = line.strip_prefix("ctt ") {
            let name = rest.split(' ').next().unwrap_or("").to_string();
            blocks.insert(name.clone(), format!("{line}\n"));
            current = Some(name);
        } else if let Some(name) = &current {
            let b = blocks.get_mut(name).unwrap();
            b.push_str(line);
            b.push('\n');
        }
    }
    (seed, blocks)
}

/// Signatures listed in the `FAILURES` section of a summary.
fn failed_signatures(summary: &str) -> BTreeSet<String> {
    summary
        .lines()
        .skip_while(|l| *l != "FAILURES")
        .skip(1)
        .filter_map(|l| l.split('\t').next())
        .map(str::to_string)
        .collect()
}

fn verify_kind(
    outdir: &Path,
    orientable: bool,
    failures: &BTreeSet<String>,
    report: &mut VerifyReport,
) -> io::Result<()> {
    let tag = kind_tag(orientable);
    let listed: BTreeSet<String> = read_lines(&outdir.join(format!("ctt_sigs_{tag}.txt")))?
        .into_iter()
        .collect();
    let rows = read_lines(&outdir.join(format!("census_{tag}.tsv")))?;
    let (seed, log) = parse_log(&fs::read_to_string(outdir.join(format!("certification_{tag}.txt")))?);
    let opts = CanonizeOptions {
        seed,
        ..CanonizeOptions::default()
    };

    // Grouping: every listed CTT is in exactly one record or failed.
    let mut grouping = Vec::new();
    let mut seen: BTreeMap<String, String> = BTreeMap::new();
    let mut isometry_sigs: BTreeMap<String, String> = BTreeMap::new();
    let mut index_order: BTreeMap<usize, Vec<(usize, String)>> = BTreeMap::new();
    for row in &rows {
        let cols: Vec<&str> = row.split('\t').collect();
        if cols.len() != TSV_COLUMNS.len() {
            grouping.push(format!("malformed row `{row}`"));
            continue;
        }
        for s in cols[4].split(';') {
            if let Some(prev) = seen.insert(s.to_string(), cols[0].to_string()) {
                grouping.push(format!("{s} in {prev} and {}", cols[0]));
            }
            if !listed.contains(s) {
                grouping.push(format!("{s} in {} not in the CTT list", cols[0]));
            }
        }
        if let Some(prev) = isometry_sigs.insert(cols[5].to_string(), cols[0].to_string()) {
            grouping.push(format!("{prev} and {} share an isometry signature", cols[0]));
        }
        if let (Ok(n), Some(idx)) = (
            cols[1].parse::<usize>(),
            cols[0].rsplit('_').next().and_then(|i| i.parse().ok()),
        ) {
            index_order
                .entry(n)
                .or_default()
                .push((idx, cols[4].split(';').next().unwrap_or("").to_string()));
        }
    }
    for s in &listed {
        if !seen.contains_key(s) && !failures.contains(s) {
            grouping.push(format!("{s} is in no record"));
        }
    }
    for (n, mut v) in index_order {
        v.sort();
        let indices_ok = v.iter().enumerate().all(|(i, (idx, _))| *idx == i);
        let sorted = v.windows(2).all(|w| w[0].1 < w[1].1);
        if !indices_ok || !sorted {
            grouping.push(format!("indices of size {n} are not in signature order"));
        }
    }
    report.push(format!("{tag}:grouping"), grouping);

    // Per record: recompute everything and compare.
    let checks: Vec<(String, Vec<String>)> = rows
        .par_iter()
        .map(|row| {
            let cols: Vec<&str> = row.split('\t').collect();
            let name = cols[0].to_string();
            let mut problems = Vec::new();
            let n_tets = cols.get(1).and_then(|c| c.parse().ok()).unwrap_or(0);
            if !is_manifold_name(&name, orientable, n_tets) {
                problems.push("bad name".to_string());
            }
            let sigs: Vec<String> = cols
                .get(4)
                .map_or(Vec::new(), |c| c.split(';').map(str::to_string).collect());
            let mut analyses = Vec::new();
            for (k, s) in sigs.iter().enumerate() {
                match analyze(s, &opts) {
                    Ok(a) => {
                        if a.triangulation.is_orientable().ok() != Some(orientable) {
                            problems.push(format!("#{k} has the wrong orientability"));
                        }
                        if !a.report.passed() {
                            problems.push(format!("#{k} fails certification"));
                        }
                        let block = certification_block(&format!("{name}#{k}"), &a);
                        if log.get(&format!("{name}#{k}")) != Some(&block) {
                            problems.push(format!("#{k} certification replay differs from the log"));
                        }
                        analyses.push(a);
                    }
                    Err(e) => problems.push(format!("#{k}: {e}")),
                }
            }
            if analyses.len() == sigs.len() && !analyses.is_empty() {
                let refs: Vec<&CttAnalysis> = analyses.iter().collect();
                if refs.iter().any(|a| a.data.signature != refs[0].data.signature) {
                    problems.push("CTTs have different isometry signatures".to_string());
                }
                match build_record(name.clone(), &refs) {
                    Ok(r) => {
                        if r.tsv_line() != *row {
                            problems.push("recomputed record differs".to_string());
                        }
                        if r.n_cusps == 1 && r.ctts.len() > 1 {
                            problems.push("one-cusped class with several CTTs".to_string());
                        }
                    }
                    Err(e) => problems.push(e.to_string()),
                }
                if sigs.windows(2).any(|w| w[0] >= w[1]) {
                    problems.push("CTTs not sorted".to_string());
                }
            }
            (name, problems)
        })
        .collect();
    for (name, problems) in checks {
        report.push(name, problems);
    }
    Ok(())
}

/// Replays a census directory written by [`run_census`].
pub fn verify(outdir: &Path) -> io::Result<VerifyReport> {
    let mut report = VerifyReport::default();
    let summary = fs::read_to_string(outdir.join("summary.txt"))?;
    let failures = failed_signatures(&summary);
    if !failures.is_empty() {
        report.push("failures", vec![format!("{} uncertified CTTs listed", failures.len())]);
    }
    let mut any = false;
    for orientable in [true, false] {
        if outdir.join(format!("census_{}.tsv", kind_tag(orientable))).exists() {
            any = true;
            verify_kind(outdir, orientable, &failures, &mut report)?;
        }
    }
    if !any {
        return Err(io::Error::new(io::ErrorKind::NotFound, "no census files"));
    }
    Ok(report)
}
