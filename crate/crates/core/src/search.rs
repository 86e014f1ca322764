//! Grid search over construction parameters with deduplication by
//! permutation-invariant fingerprints.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{random_probe, CodeRecord, InfoSetFamily, InvariantOptions};
use crate::cyclic_field::{find_generators, find_v_pairs, FieldContext, V19_PUBLISHED};
use crate::decomposition::{
    build_code, default_fixed_gen_id, dihedral_evidence, dihedral_filter, fixed_gen, printed_pairing_78,
    standard_pairing, AutomorphismType, ConstructionParams, DihedralEvidence,
};
use crate::error::{Error, Result};
use crate::gf2::Permutation;

pub const STORE_SCHEMA_VERSION: u32 = 1;

/// Where the `(v₁, v₂)` pairs come from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VSource {
    /// The 29 listed pairs (p = 19 only).
    Published,
    /// Every solution of `a^v₁ + a^v₂ = e`.
    Raw,
    List(Vec<(u64, u64)>),
}

/// Which class-to-representative table restricts `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairingSource {
    Computed,
    /// The table listed with the length-78 search (p = 19, f = 2 only).
    Printed,
}

/// Inclusive range of one `u` coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct URange(pub u64, pub u64);

impl FromStr for URange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad u range {s:?}"));
        match s.split_once("..") {
            Some((a, b)) => Ok(URange(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)),
            None => {
                let x = s.trim().parse().map_err(|_| bad())?;
                Ok(URange(x, x))
            }
        }
    }
}

impl fmt::Display for URange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == self.1 {
            write!(f, "{}", self.0)
        } else {
            write!(f, "{}..{}", self.0, self.1)
        }
    }
}

/// A search configuration; read from and written to a `key = value` file.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchPlan {
    pub p: usize,
    pub f: usize,
    pub v_source: VSource,
    /// Use only the first `v_limit` pairs.
    pub v_limit: Option<usize>,
    pub target_d: usize,
    pub pairing: PairingSource,
    pub fixed_gen: String,
    pub u: [Option<URange>; 3],
    pub classes: Vec<u8>,
    /// Restricts the representatives `s` (default: all).
    pub s: Option<Vec<Permutation>>,
    /// Maximum number of grid points processed in one run.
    pub budget: Option<u64>,
    pub threads: Option<usize>,
    pub checkpoint: Option<PathBuf>,
    pub checkpoint_every: u64,
    pub probe_weight: usize,
    /// Extra random information sets tried before the distance proof.
    pub probe_sets: usize,
    pub probe_sets_weight: usize,
    pub invariants: InvariantOptions,
    pub dihedral_check: bool,
    /// Seed for the generator search when no reference elements exist.
    pub seed: Option<u64>,
}

impl SearchPlan {
    pub fn new(p: usize, f: usize, target_d: usize) -> Result<Self> {
        Ok(SearchPlan {
            p,
            f,
            v_source: if p == 19 { VSource::Published } else { VSource::Raw },
            v_limit: None,
            target_d,
            pairing: PairingSource::Computed,
            fixed_gen: default_fixed_gen_id(f)?.to_string(),
            u: [None; 3],
            classes: vec![1, 2, 3, 4],
            s: None,
            budget: None,
            threads: None,
            checkpoint: None,
            checkpoint_every: 4096,
            probe_weight: 3,
            probe_sets: 8,
            probe_sets_weight: 4,
            invariants: InvariantOptions { extra_weights: 0, ..InvariantOptions::default() },
            dihedral_check: true,
            seed: None,
        })
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut kv: BTreeMap<String, String> = BTreeMap::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse(format!("line {}: expected key = value", no + 1)))?;
            kv.insert(k.trim().to_string(), v.trim().to_string());
        }
        let take = |kv: &mut BTreeMap<String, String>, k: &str| kv.remove(k).filter(|v| !v.is_empty());
        let num = |k: &str, v: String| -> Result<u64> { v.parse().map_err(|_| Error::Parse(format!("{k}: bad number {v:?}"))) };
        let p = num("p", take(&mut kv, "p").ok_or_else(|| Error::Parse("plan needs p".into()))?)? as usize;
        let f = num("f", take(&mut kv, "f").ok_or_else(|| Error::Parse("plan needs f".into()))?)? as usize;
        let d = num("target_d", take(&mut kv, "target_d").ok_or_else(|| Error::Parse("plan needs target_d".into()))?)?;
        let mut plan = SearchPlan::new(p, f, d as usize)?;
        let pairs = take(&mut kv, "v_pairs").map(|v| parse_pairs(&v)).transpose()?;
        if let Some(src) = take(&mut kv, "v_source") {
            plan.v_source = match src.as_str() {
                "published" => VSource::Published,
                "raw" => VSource::Raw,
                "list" => VSource::List(pairs.clone().ok_or_else(|| Error::Parse("v_source = list needs v_pairs".into()))?),
                _ => return Err(Error::Parse(format!("v_source: unknown {src:?}"))),
            };
        } else if let Some(pairs) = pairs {
            plan.v_source = VSource::List(pairs);
        }
        if let Some(v) = take(&mut kv, "v_limit") {
            plan.v_limit = Some(num("v_limit", v)? as usize);
        }
        if let Some(v) = take(&mut kv, "pairing") {
            plan.pairing = match v.as_str() {
                "computed" => PairingSource::Computed,
                "printed" => PairingSource::Printed,
                _ => return Err(Error::Parse(format!("pairing: unknown {v:?}"))),
            };
        }
        if let Some(v) = take(&mut kv, "fixed_gen") {
            plan.fixed_gen = v;
        }
        for (i, key) in ["u1", "u2", "u3"].iter().enumerate() {
            if let Some(v) = take(&mut kv, key) {
                plan.u[i] = Some(v.parse()?);
            }
        }
        if let Some(v) = take(&mut kv, "classes") {
            plan.classes = v
                .split(',')
                .map(|c| c.trim().parse::<u8>().ok().filter(|x| (1..=4).contains(x)))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::Parse(format!("classes: bad list {v:?}")))?;
        }
        if let Some(v) = take(&mut kv, "s") {
            plan.s = Some(v.split(';').map(|s| Permutation::from_cycles(4, s.trim())).collect::<Result<_>>()?);
        }
        if let Some(v) = take(&mut kv, "budget") {
            plan.budget = Some(num("budget", v)?);
        }
        if let Some(v) = take(&mut kv, "threads") {
            plan.threads = Some(num("threads", v)? as usize);
        }
        if let Some(v) = take(&mut kv, "checkpoint") {
            plan.checkpoint = Some(PathBuf::from(v));
        }
        if let Some(v) = take(&mut kv, "checkpoint_every") {
            plan.checkpoint_every = num("checkpoint_every", v)?.max(1);
        }
        if let Some(v) = take(&mut kv, "probe_weight") {
            plan.probe_weight = num("probe_weight", v)? as usize;
        }
        if let Some(v) = take(&mut kv, "probe_sets") {
            plan.probe_sets = num("probe_sets", v)? as usize;
        }
        if let Some(v) = take(&mut kv, "probe_sets_weight") {
            plan.probe_sets_weight = num("probe_sets_weight", v)? as usize;
        }
        if let Some(v) = take(&mut kv, "extra_weights") {
            plan.invariants.extra_weights = num("extra_weights", v)? as usize;
        }
        if let Some(v) = take(&mut kv, "shadow_w_max") {
            plan.invariants.shadow_w_max = Some(num("shadow_w_max", v)? as usize);
        }
        if let Some(v) = take(&mut kv, "max_info_weight") {
            plan.invariants.max_info_weight = num("max_info_weight", v)? as usize;
        }
        if let Some(v) = take(&mut kv, "intersections") {
            plan.invariants.intersections = parse_bool("intersections", &v)?;
        }
        if let Some(v) = take(&mut kv, "dihedral_check") {
            plan.dihedral_check = parse_bool("dihedral_check", &v)?;
        }
        if let Some(v) = take(&mut kv, "seed") {
            plan.seed = Some(num("seed", v)?);
        }
        if let Some(k) = kv.keys().next() {
            return Err(Error::Parse(format!("unknown plan key {k:?}")));
        }
        Ok(plan)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_text(&fs::read_to_string(path)?)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("p = {}\nf = {}\ntarget_d = {}\n", self.p, self.f, self.target_d);
        match &self.v_source {
            VSource::Published => out += "v_source = published\n",
            VSource::Raw => out += "v_source = raw\n",
            VSource::List(pairs) => {
                let s: Vec<String> = pairs.iter().map(|(a, b)| format!("{a}:{b}")).collect();
                out += &format!("v_source = list\nv_pairs = {}\n", s.join(", "));
            }
        }
        if let Some(l) = self.v_limit {
            out += &format!("v_limit = {l}\n");
        }
        out += &format!(
            "pairing = {}\nfixed_gen = {}\n",
            match self.pairing {
                PairingSource::Computed => "computed",
                PairingSource::Printed => "printed",
            },
            self.fixed_gen
        );
        for (i, r) in self.u.iter().enumerate() {
            if let Some(r) = r {
                out += &format!("u{} = {r}\n", i + 1);
            }
        }
        let cl: Vec<String> = self.classes.iter().map(|c| c.to_string()).collect();
        out += &format!("classes = {}\n", cl.join(","));
        if let Some(s) = &self.s {
            let s: Vec<String> = s.iter().map(|x| x.to_string()).collect();
            out += &format!("s = {}\n", s.join("; "));
        }
        if let Some(b) = self.budget {
            out += &format!("budget = {b}\n");
        }
        if let Some(t) = self.threads {
            out += &format!("threads = {t}\n");
        }
        if let Some(c) = &self.checkpoint {
            out += &format!("checkpoint = {}\n", c.display());
        }
        out += &format!("checkpoint_every = {}\nprobe_weight = {}\n", self.checkpoint_every, self.probe_weight);
        out += &format!("probe_sets = {}\nprobe_sets_weight = {}\n", self.probe_sets, self.probe_sets_weight);
        out += &format!("extra_weights = {}\n", self.invariants.extra_weights);
        if let Some(w) = self.invariants.shadow_w_max {
            out += &format!("shadow_w_max = {w}\n");
        }
        if self.invariants.max_info_weight != usize::MAX {
            out += &format!("max_info_weight = {}\n", self.invariants.max_info_weight);
        }
        out += &format!("intersections = {}\ndihedral_check = {}\n", self.invariants.intersections, self.dihedral_check);
        if let Some(s) = self.seed {
            out += &format!("seed = {s}\n");
        }
        out
    }

    /// Lines that determine which grid points exist and what is computed
    /// for them; a checkpoint only resumes a plan with the same identity.
    fn identity(&self) -> String {
        self.to_text()
            .lines()
            .filter(|l| !["budget", "threads", "checkpoint", "checkpoint_every"].iter().any(|k| l.starts_with(k)))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::Parse(format!("{key}: expected true or false, got {v:?}"))),
    }
}

fn parse_pairs(text: &str) -> Result<Vec<(u64, u64)>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            let (a, b) = s.trim().split_once(':').ok_or_else(|| Error::Parse(format!("v pair {s:?} must be v1:v2")))?;
            let a = a.trim().parse().map_err(|_| Error::Parse(format!("bad v pair {s:?}")))?;
            let b = b.trim().parse().map_err(|_| Error::Parse(format!("bad v pair {s:?}")))?;
            Ok((a, b))
        })
        .collect()
}

/// One grid point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridPoint {
    pub index: u64,
    pub v: (u64, u64),
    pub u: [u64; 3],
    pub s: Permutation,
}

/// The grid of a plan, enumerated lazily in a fixed order: `v` pairs, then
/// `u₁`, `u₂`, `u₃`, then representatives.
pub struct Grid {
    pub ctx: FieldContext,
    pub ty: AutomorphismType,
    pub pairs: Vec<(u64, u64)>,
    pub reps: Vec<Permutation>,
    /// Class ↦ representatives allowed with it.
    pub pairing: BTreeMap<u8, Vec<Permutation>>,
    ranges: [URange; 3],
    classes: Vec<u8>,
    modulus: u64,
    per_pair: u64,
}

impl Grid {
    pub fn new(plan: &SearchPlan) -> Result<Self> {
        let ctx = match (FieldContext::reference(plan.p), plan.seed) {
            (Some(ctx), None) => ctx,
            _ => find_generators(plan.p, plan.seed)?,
        };
        let ty = AutomorphismType::new(plan.p, 4, plan.f);
        let fg = fixed_gen(&plan.fixed_gen)?;
        if fg.ncols() != 4 + plan.f {
            return Err(Error::InvalidParams(format!("fixed generator has {} columns, need {}", fg.ncols(), 4 + plan.f)));
        }
        let (reps, computed) = standard_pairing(ty, &fg)?;
        let pairing = match plan.pairing {
            PairingSource::Computed => computed,
            PairingSource::Printed if plan.p == 19 && plan.f == 2 => printed_pairing_78(),
            PairingSource::Printed => {
                return Err(Error::UnsupportedCase("the printed pairing exists for p = 19, f = 2 only".into()))
            }
        };
        let reps = match &plan.s {
            Some(only) => reps.into_iter().filter(|s| only.contains(s)).collect(),
            None => reps,
        };
        let mut pairs = match &plan.v_source {
            VSource::Published if plan.p == 19 => V19_PUBLISHED.to_vec(),
            VSource::Published => {
                return Err(Error::UnsupportedCase(format!("no published v pairs for p = {}", plan.p)))
            }
            VSource::Raw => find_v_pairs(&ctx),
            VSource::List(l) => l.clone(),
        };
        if let Some(l) = plan.v_limit {
            pairs.truncate(l);
        }
        let modulus = ctx.b_order();
        let full = URange(0, modulus - 1);
        let ranges = plan.u.map(|r| r.unwrap_or(full));
        if ranges.iter().any(|r| r.0 > r.1 || r.1 >= modulus) {
            return Err(Error::InvalidParams(format!("u ranges must lie in 0..{}", modulus - 1)));
        }
        let mut grid =
            Grid { ctx, ty, pairs, reps, pairing, ranges, classes: plan.classes.clone(), modulus, per_pair: 0 };
        grid.per_pair = grid.u_points().count() as u64;
        Ok(grid)
    }

    /// Number of grid points.
    pub fn size(&self) -> u64 {
        self.per_pair * self.pairs.len() as u64
    }

    fn allowed(&self, u: [u64; 3]) -> Vec<usize> {
        let classes: Vec<u8> =
            dihedral_filter(u, self.modulus).into_iter().filter(|c| self.classes.contains(c)).collect();
        (0..self.reps.len())
            .filter(|&i| classes.iter().any(|c| self.pairing.get(c).is_some_and(|l| l.contains(&self.reps[i]))))
            .collect()
    }

    fn u_points(&self) -> impl Iterator<Item = ([u64; 3], usize)> + '_ {
        let [r1, r2, r3] = self.ranges;
        let m = self.modulus;
        (r1.0..=r1.1).flat_map(move |u1| {
            (r2.0..=r2.1).flat_map(move |u2| {
                let mut cands = vec![(u1 + u2) % m, (u1 + m - u2) % m, (u2 + m - u1) % m];
                cands.sort_unstable();
                cands.dedup();
                cands
                    .into_iter()
                    .filter(move |u3| r3.0 <= *u3 && *u3 <= r3.1)
                    .flat_map(move |u3| self.allowed([u1, u2, u3]).into_iter().map(move |i| ([u1, u2, u3], i)))
            })
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = GridPoint> + '_ {
        self.pairs
            .iter()
            .flat_map(move |&v| self.u_points().map(move |(u, i)| (v, u, i)))
            .enumerate()
            .map(|(index, (v, u, i))| GridPoint { index: index as u64, v, u, s: self.reps[i].clone() })
    }
}

/// Permutation-invariant summary used to tell codes apart.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Fingerprint {
    pub d: usize,
    pub a_d: u64,
    pub i_2d: Option<u64>,
    /// Nonzero shadow counts `(weight, count)` in the computed range.
    pub shadow: Vec<(usize, u64)>,
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={} A={}", self.d, self.a_d)?;
        if let Some(i) = self.i_2d {
            write!(f, " I={i}")?;
        }
        for (w, c) in &self.shadow {
            write!(f, " B{w}={c}")?;
        }
        Ok(())
    }
}

pub fn fingerprint(record: &CodeRecord) -> Fingerprint {
    Fingerprint {
        d: record.d,
        a_d: record.a_d,
        i_2d: record.i_2d,
        shadow: record.shadow_counts.as_ref().map(|s| s.counts.iter().map(|(&w, &c)| (w, c)).collect()).unwrap_or_default(),
    }
}

/// One fingerprint class: the first code found, plus every later grid point
/// with the same fingerprint. Equal fingerprints do not prove equivalence,
/// so classes with more than one point are flagged for review.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoredCode {
    pub fingerprint: Fingerprint,
    pub record: CodeRecord,
    pub grid_index: u64,
    pub dihedral: Option<DihedralEvidence>,
    pub also_found_at: Vec<ConstructionParams>,
    pub needs_review: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub grid_size: u64,
    pub processed: u64,
    pub probe_rejects: u64,
    pub distance_rejects: u64,
    pub survivors: u64,
    pub unproven: u64,
    pub failures: Vec<String>,
}

/// Results of a search, in grid order of first discovery.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultStore {
    pub schema_version: u32,
    pub plan: String,
    pub codes: Vec<StoredCode>,
    /// Grid points before this index are done.
    pub next_index: u64,
    pub complete: bool,
    pub stats: SearchStats,
}

impl ResultStore {
    pub fn fingerprints(&self) -> Vec<&Fingerprint> {
        self.codes.iter().map(|c| &c.fingerprint).collect()
    }

    fn insert(&mut self, cand: Candidate) {
        match self.codes.iter_mut().find(|c| c.fingerprint == cand.fingerprint) {
            Some(existing) => {
                if let Some(p) = cand.record.params {
                    existing.also_found_at.push(p);
                }
                existing.needs_review = true;
            }
            None => self.codes.push(StoredCode {
                fingerprint: cand.fingerprint,
                record: cand.record,
                grid_index: cand.index,
                dihedral: cand.dihedral,
                also_found_at: Vec::new(),
                needs_review: false,
            }),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, serde_json::to_string(self)?)?;
        fs::rename(tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }

    /// One JSON record per line.
    pub fn write_jsonl(&self, out: &mut impl Write) -> Result<()> {
        for c in &self.codes {
            writeln!(out, "{}", c.record.to_json()?)?;
        }
        Ok(())
    }

    pub fn write_csv(&self, out: &mut impl Write) -> Result<()> {
        writeln!(out, "{},needs_review", CodeRecord::CSV_HEADER)?;
        for c in &self.codes {
            writeln!(out, "{},{}", c.record.csv_row(), c.needs_review)?;
        }
        Ok(())
    }

    pub fn summary(&self) -> String {
        let s = &self.stats;
        let mut out = format!(
            "grid {} points, processed {} ({}), probe rejects {}, distance rejects {}, survivors {}, unproven {}, failures {}\n",
            s.grid_size,
            s.processed,
            if self.complete { "complete" } else { "incomplete" },
            s.probe_rejects,
            s.distance_rejects,
            s.survivors,
            s.unproven,
            s.failures.len()
        );
        out += &format!("{} distinct fingerprints\n", self.codes.len());
        for c in &self.codes {
            let params = c.record.params.as_ref().map(|p| p.to_string()).unwrap_or_default();
            let fam = match &c.record.family {
                Some(f) => {
                    let ps: Vec<String> = c.record.derived_params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    format!(" family {f} {}", ps.join(" "))
                }
                None => String::new(),
            };
            out += &format!(
                "  {} [{}]{fam} x{}{}\n",
                c.fingerprint,
                params,
                1 + c.also_found_at.len(),
                if c.needs_review { " review" } else { "" }
            );
        }
        out
    }
}

struct Candidate {
    index: u64,
    fingerprint: Fingerprint,
    record: CodeRecord,
    dihedral: Option<DihedralEvidence>,
}

enum Outcome {
    ProbeReject,
    DistanceReject,
    Unproven,
    Survivor(Box<Candidate>),
    Failed(String),
}

fn evaluate(grid: &Grid, plan: &SearchPlan, pt: &GridPoint) -> Outcome {
    match evaluate_inner(grid, plan, pt) {
        Ok(o) => o,
        Err(e) => Outcome::Failed(format!("grid point {}: {e}", pt.index)),
    }
}

fn evaluate_inner(grid: &Grid, plan: &SearchPlan, pt: &GridPoint) -> Result<Outcome> {
    let params = ConstructionParams {
        p: plan.p,
        f: plan.f,
        u: pt.u,
        v: pt.v,
        s: pt.s.clone(),
        fixed_gen_id: plan.fixed_gen.clone(),
    };
    let gen = build_code(&grid.ctx, &params)?.canonical();
    let fam = InfoSetFamily::new(&gen)?;
    if fam.probe(plan.probe_weight, plan.target_d).is_some() {
        return Ok(Outcome::ProbeReject);
    }
    let seed = plan.seed.unwrap_or(0) ^ pt.index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    if random_probe(&gen, plan.probe_sets, plan.probe_sets_weight, plan.target_d, seed).is_some() {
        return Ok(Outcome::ProbeReject);
    }
    let (d, proven) = fam.min_distance_above(plan.invariants.max_info_weight, plan.target_d);
    if d < plan.target_d {
        return Ok(Outcome::DistanceReject);
    }
    if !proven {
        return Ok(Outcome::Unproven);
    }
    let record = CodeRecord::compute_with(&fam, gen, d, Some(params), &plan.invariants)?;
    let dihedral = if plan.dihedral_check { dihedral_evidence(&record.gen, grid.ty)? } else { None };
    Ok(Outcome::Survivor(Box::new(Candidate { index: pt.index, fingerprint: fingerprint(&record), record, dihedral })))
}

/// Progress callback argument: `(processed, grid size, distinct codes)`.
pub type Progress<'a> = &'a (dyn Fn(u64, u64, usize) + Sync);

/// Runs the plan. Grid points are evaluated in parallel chunks and merged in
/// grid order, so the store does not depend on the thread count.
pub fn run_search(plan: &SearchPlan, progress: Option<Progress<'_>>) -> Result<ResultStore> {
    let go = || run_inner(plan, progress);
    match plan.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?
            .install(go),
        None => go(),
    }
}

fn run_inner(plan: &SearchPlan, progress: Option<Progress<'_>>) -> Result<ResultStore> {
    let grid = Grid::new(plan)?;
    let identity = plan.identity();
    let mut store = match &plan.checkpoint {
        Some(path) if path.exists() => {
            let store = ResultStore::load(path)?;
            if store.plan != identity {
                return Err(Error::InvalidParams(format!("checkpoint {} belongs to a different plan", path.display())));
            }
            store
        }
        _ => ResultStore { schema_version: STORE_SCHEMA_VERSION, plan: identity, ..Default::default() },
    };
    store.stats.grid_size = grid.size();
    let start = store.next_index;
    let end = match plan.budget {
        Some(b) => (start + b).min(grid.size()),
        None => grid.size(),
    };
    let chunk = (rayon::current_num_threads() as u64 * 16).clamp(16, plan.checkpoint_every.max(16));
    let mut points = grid.iter().skip(start as usize).take((end - start) as usize).peekable();
    let mut since_checkpoint = 0;
    while points.peek().is_some() {
        let batch: Vec<GridPoint> = points.by_ref().take(chunk as usize).collect();
        let outcomes: Vec<Outcome> = batch.par_iter().map(|pt| evaluate(&grid, plan, pt)).collect();
        for outcome in outcomes {
            match outcome {
                Outcome::ProbeReject => store.stats.probe_rejects += 1,
                Outcome::DistanceReject => store.stats.distance_rejects += 1,
                Outcome::Unproven => store.stats.unproven += 1,
                Outcome::Failed(msg) => store.stats.failures.push(msg),
                Outcome::Survivor(c) => {
                    store.stats.survivors += 1;
                    store.insert(*c);
                }
            }
        }
        let n = batch.len() as u64;
        store.next_index += n;
        store.stats.processed += n;
        since_checkpoint += n;
        if let Some(path) = &plan.checkpoint {
            if since_checkpoint >= plan.checkpoint_every {
                store.save(path)?;
                since_checkpoint = 0;
            }
        }
        if let Some(cb) = progress {
            cb(store.next_index, grid.size(), store.codes.len());
        }
    }
    store.complete = store.next_index >= grid.size();
    if let Some(path) = &plan.checkpoint {
        store.save(path)?;
    }
    Ok(store)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plan_text_round_trip() {
        let text = "p = 19\nf = 2\ntarget_d = 14\nv_pairs = 1:93, 215:335\nu1 = 6\nu2 = 0..26\ns = (1,2,3,4); I\nbudget = 10\n";
        let plan = SearchPlan::from_text(text).unwrap();
        assert_eq!(plan.v_source, VSource::List(vec![(1, 93), (215, 335)]));
        assert_eq!(plan.u[1], Some(URange(0, 26)));
        assert_eq!(SearchPlan::from_text(&plan.to_text()).unwrap(), plan);
        assert!(SearchPlan::from_text("p = 19\nf = 2\ntarget_d = 14\ncolour = red\n").is_err());
        assert!(SearchPlan::from_text("f = 2\n").is_err());
    }

    #[test]
    fn grid_of_one_point() {
        let plan = SearchPlan::from_text(
            "p = 19\nf = 2\ntarget_d = 14\nv_pairs = 1:93\nu1 = 6\nu2 = 15\nu3 = 21\ns = (1,2,3,4)\n",
        )
        .unwrap();
        let grid = Grid::new(&plan).unwrap();
        assert_eq!(grid.size(), 1);
        let pts: Vec<GridPoint> = grid.iter().collect();
        assert_eq!(pts[0].u, [6, 15, 21]);
    }

    #[test]
    fn grid_respects_pairing() {
        let mut plan = SearchPlan::new(19, 2, 14).unwrap();
        plan.v_source = VSource::List(vec![(1, 93)]);
        let grid = Grid::new(&plan).unwrap();
        for pt in grid.iter().take(2000) {
            let classes = dihedral_filter(pt.u, 27);
            assert!(classes.iter().any(|c| grid.pairing[c].contains(&pt.s)));
        }
        let sizes: Vec<u64> = grid.iter().map(|p| p.index).take(3).collect();
        assert_eq!(sizes, vec![0, 1, 2]);
    }

    #[test]
    fn empty_pairs_give_empty_store() {
        let mut plan = SearchPlan::new(19, 2, 14).unwrap();
        plan.v_source = VSource::List(vec![]);
        let store = run_search(&plan, None).unwrap();
        assert!(store.codes.is_empty() && store.complete);
        assert_eq!(store.stats.grid_size, 0);
    }
}
