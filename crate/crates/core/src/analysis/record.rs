use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{intersection_numbers, shadow, InfoSetFamily, LowWeightQuery, WeightProfile};
use crate::decomposition::ConstructionParams;
use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::shadow_theory::{derive_parameters, fmt_q, shadow_clause_check, ClauseViolation};

pub const RECORD_SCHEMA_VERSION: u32 = 1;

/// What [`CodeRecord::compute`] works out beyond `d` and `A_d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantOptions {
    /// Weight counts are complete up to `d + extra_weights`.
    pub extra_weights: usize,
    /// Shadow counts up to this weight; `None` means `d − 2`, `Some(0)`
    /// skips the shadow.
    pub shadow_w_max: Option<usize>,
    pub max_info_weight: usize,
    pub intersections: bool,
}

impl Default for InvariantOptions {
    fn default() -> Self {
        InvariantOptions { extra_weights: 2, shadow_w_max: None, max_info_weight: usize::MAX, intersections: true }
    }
}

/// A code with the invariants used to tell codes apart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeRecord {
    pub schema_version: u32,
    pub params: Option<ConstructionParams>,
    pub n: usize,
    pub k: usize,
    pub gen: BitMatrix,
    pub d: usize,
    pub d_proven: bool,
    pub a_d: u64,
    /// `I_{2d}` over the minimum weight words.
    pub i_2d: Option<u64>,
    pub intersections: Option<BTreeMap<usize, u64>>,
    pub weights: WeightProfile,
    pub shadow_counts: Option<WeightProfile>,
    pub shadow_violations: Vec<ClauseViolation>,
    /// Name of the listed family the counts fit, with its parameters.
    pub family: Option<String>,
    pub derived_params: BTreeMap<String, String>,
}

impl CodeRecord {
    pub fn compute(gen: &BitMatrix, params: Option<ConstructionParams>, opts: &InvariantOptions) -> Result<Self> {
        let gen = gen.canonical();
        let fam = InfoSetFamily::new(&gen)?;
        let (d, d_proven) = fam.min_distance(opts.max_info_weight);
        if !d_proven {
            return Err(Error::IncompleteCoverage(format!("minimum distance only bounded above by {d}")));
        }
        Self::compute_with(&fam, gen, d, params, opts)
    }

    /// As [`Self::compute`] for a canonical generator whose information
    /// sets and proven minimum distance are already known.
    pub fn compute_with(
        fam: &InfoSetFamily,
        gen: BitMatrix,
        d: usize,
        params: Option<ConstructionParams>,
        opts: &InvariantOptions,
    ) -> Result<Self> {
        let d_proven = true;
        let w_max = (d + opts.extra_weights).min(gen.ncols());
        let collect = opts.intersections.then_some((d, d));
        let hits = fam.enumerate(&LowWeightQuery { collect, ..LowWeightQuery::up_to(w_max) })?;
        let weights = WeightProfile::from_counts(gen.ncols(), &hits.counts);
        let a_d = weights.get(d);
        let intersections = opts.intersections.then(|| intersection_numbers(&hits.words));
        let i_2d = intersections.as_ref().map(|h| h.get(&(2 * d)).copied().unwrap_or(0));

        let s_max = opts.shadow_w_max.unwrap_or(d.saturating_sub(2));
        let shadow_counts = if s_max == 0 {
            None
        } else {
            match shadow(&gen) {
                Ok(dec) => {
                    let q = LowWeightQuery { offset: Some(dec.t1.clone()), ..LowWeightQuery::up_to(s_max) };
                    Some(WeightProfile::from_counts(gen.ncols(), &fam.enumerate(&q)?.counts))
                }
                Err(Error::NoShadow) => None,
                Err(e) => return Err(e),
            }
        };
        let shadow_violations = shadow_counts.as_ref().map(|s| shadow_clause_check(s, d)).unwrap_or_default();
        let (family, derived_params) = match derive_parameters(gen.ncols(), &weights, shadow_counts.as_ref())? {
            Some((name, values)) => (Some(name), values.iter().map(|(k, v)| (k.clone(), fmt_q(v))).collect()),
            None => (None, BTreeMap::new()),
        };
        Ok(CodeRecord {
            schema_version: RECORD_SCHEMA_VERSION,
            params,
            n: gen.ncols(),
            k: gen.nrows(),
            d,
            d_proven,
            a_d,
            i_2d,
            intersections,
            weights,
            shadow_counts,
            shadow_violations,
            family,
            derived_params,
            gen,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub const CSV_HEADER: &'static str = "u1,u2,u3,v1,v2,s,n,d,A_d,beta,alpha,I_2d";

    pub fn csv_row(&self) -> String {
        let (u, v, s) = match &self.params {
            Some(p) => {
                let u = p.u;
                ([u[0].to_string(), u[1].to_string(), u[2].to_string()], [p.v.0.to_string(), p.v.1.to_string()], p.s.to_string())
            }
            None => (Default::default(), Default::default(), String::new()),
        };
        let get = |k: &str| self.derived_params.get(k).cloned().unwrap_or_default();
        format!(
            "{},{},{},{},{},\"{}\",{},{},{},{},{},{}",
            u[0],
            u[1],
            u[2],
            v[0],
            v[1],
            s,
            self.n,
            self.d,
            self.a_d,
            get("beta"),
            get("alpha"),
            self.i_2d.map(|x| x.to_string()).unwrap_or_default()
        )
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(p) = &self.params {
            out += &format!("params: {p}\n");
        }
        out += &format!("[{}, {}, {}]{}\n", self.n, self.k, self.d, if self.d_proven { "" } else { " (d unproven)" });
        let counts: Vec<String> = self.weights.counts.iter().map(|(w, c)| format!("A{w}={c}")).collect();
        out += &format!("weights: {}\n", counts.join(" "));
        if let Some(i) = self.i_2d {
            out += &format!("I{} = {i}\n", 2 * self.d);
        }
        if let Some(s) = &self.shadow_counts {
            let counts: Vec<String> = s.counts.iter().map(|(w, c)| format!("B{w}={c}")).collect();
            out += &format!("shadow (to weight {}): {}\n", s.w_max, if counts.is_empty() { "-".into() } else { counts.join(" ") });
        }
        for v in &self.shadow_violations {
            out += &format!("shadow clause {} violated: {}\n", v.clause, v.detail);
        }
        if let Some(f) = &self.family {
            let ps: Vec<String> = self.derived_params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            out += &format!("family {f}: {}\n", ps.join(" "));
        }
        out
    }
}
