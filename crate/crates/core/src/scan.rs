//! Exhaustive scans over bounded families of architectures, comparing the
//! theorem verdicts with sampled dimensions.

use std::ops::RangeInclusive;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{CoefficientDomain, DomainDescriptor};
use crate::engine::{neurovariety_stats_in, DimReport};
use crate::error::{Error, Result};
use crate::network::Architecture;
use crate::report::ReportRow;
use crate::theory::{in_necessity_scope, theorem_verdict, VerdictKind};

/// Default cap on free weights per architecture.
pub const DEFAULT_MAX_FREE_WEIGHTS: usize = 64;
/// Default cap on affine target coordinates per architecture.
pub const DEFAULT_MAX_AMBIENT: u128 = 20_000;

#[derive(Clone, Debug)]
pub struct ScanSpec {
    /// Range of the depth `L`.
    pub depths: RangeInclusive<usize>,
    /// Bounds on `n_0` and on every hidden width.
    pub widths: RangeInclusive<usize>,
    pub degrees: RangeInclusive<u32>,
    /// Bounds on `n_L`.
    pub outputs: RangeInclusive<usize>,
    pub max_free_weights: usize,
    pub max_ambient: u128,
    pub tries: usize,
    pub seed: u64,
    pub domain: CoefficientDomain,
    /// Worker cap; `None` uses rayon's default.
    pub threads: Option<usize>,
    /// Record wall time per row.
    pub timing: bool,
}

impl ScanSpec {
    pub fn new(domain: CoefficientDomain, seed: u64) -> Self {
        ScanSpec {
            depths: 2..=3,
            widths: 1..=4,
            degrees: 2..=4,
            outputs: 1..=2,
            max_free_weights: DEFAULT_MAX_FREE_WEIGHTS,
            max_ambient: DEFAULT_MAX_AMBIENT,
            tries: crate::engine::DEFAULT_TRIES,
            seed,
            domain,
            threads: None,
            timing: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Invalid(m.to_string()));
        if *self.depths.start() < 1 {
            return bad("depth must be at least 1");
        }
        if *self.widths.start() < 1 || *self.outputs.start() < 1 {
            return bad("widths must be at least 1");
        }
        if *self.degrees.start() < 2 {
            return bad("degrees must be at least 2");
        }
        if self.tries < 1 {
            return bad("tries must be at least 1");
        }
        Ok(())
    }

    /// Architectures of the grid passing the pre-filters, in sorted order.
    pub fn architectures(&self) -> Vec<Architecture> {
        let mut out = Vec::new();
        for l in self.depths.clone() {
            let mut widths = vec![*self.widths.start(); l];
            loop {
                for n_out in self.outputs.clone() {
                    let mut degrees = vec![*self.degrees.start(); l - 1];
                    loop {
                        let mut w = widths.clone();
                        w.push(n_out);
                        if let Ok(a) = Architecture::new(w, degrees.clone()) {
                            if a.free_weight_count() <= self.max_free_weights
                                && a.affine_target_dim() <= self.max_ambient
                            {
                                out.push(a);
                            }
                        }
                        if !odometer(&mut degrees, &self.degrees) {
                            break;
                        }
                    }
                }
                if !odometer(&mut widths, &self.widths) {
                    break;
                }
            }
        }
        out.sort();
        out
    }
}

fn odometer<T: Copy + PartialOrd + std::ops::Add<Output = T> + From<u8>>(
    v: &mut [T],
    range: &RangeInclusive<T>,
) -> bool {
    for x in v.iter_mut().rev() {
        if *x < *range.end() {
            *x = *x + T::from(1);
            return true;
        }
        *x = *range.start();
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    pub arch: Architecture,
    pub report: std::result::Result<DimReport, String>,
    pub verdict: Option<VerdictKind>,
    pub in_necessity_scope: bool,
    /// False when a positive verdict meets a defective sample, or an in-scope
    /// failed condition meets a non-defective one.
    pub agreement: bool,
    pub wall_ms: Option<u64>,
}

impl ScanRow {
    pub fn evaluate(arch: &Architecture, tries: usize, seed: u64, domain: &CoefficientDomain, timing: bool) -> Self {
        let start = Instant::now();
        let report = neurovariety_stats_in(arch, tries, seed, domain).map_err(|e| e.to_string());
        let wall_ms = timing.then(|| start.elapsed().as_millis() as u64);
        let verdict = theorem_verdict(arch).ok().map(|v| v.kind);
        let scope = in_necessity_scope(arch);
        let agreement = match (&report, verdict) {
            (Ok(r), Some(v)) => {
                !(v.predicts_expected_dim() && r.defective || scope && v.condition_failed() && !r.defective)
            }
            _ => true,
        };
        ScanRow { arch: arch.clone(), report, verdict, in_necessity_scope: scope, agreement, wall_ms }
    }

    pub fn to_report_row(&self, trials: usize, seed: u64, domain: DomainDescriptor) -> ReportRow {
        match &self.report {
            Ok(r) => ReportRow::from_dims(r, self.wall_ms),
            Err(e) => ReportRow::failed(&self.arch, trials, seed, domain, e.clone(), self.wall_ms),
        }
    }
}

/// Evaluates every architecture of the grid. Rows come back in grid order
/// whatever the worker count; failures are recorded per row.
pub fn scan(spec: &ScanSpec) -> Result<Vec<ScanRow>> {
    spec.validate()?;
    let archs = spec.architectures();
    let run = || {
        archs
            .par_iter()
            .map(|a| ScanRow::evaluate(a, spec.tries, spec.seed, &spec.domain, spec.timing))
            .collect::<Vec<_>>()
    };
    match spec.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
            Ok(pool.install(run))
        }
        None => Ok(run()),
    }
}

pub fn report_rows(spec: &ScanSpec, rows: &[ScanRow]) -> Vec<ReportRow> {
    rows.iter().map(|r| r.to_report_row(spec.tries, spec.seed, spec.domain.descriptor())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::PrimeField;

    fn field() -> CoefficientDomain {
        CoefficientDomain::PrimeField(PrimeField::new(2305843009213693951).unwrap())
    }

    #[test]
    fn grid_is_sorted_and_filtered() {
        let mut spec = ScanSpec::new(field(), 1);
        spec.depths = 2..=2;
        spec.widths = 1..=2;
        spec.degrees = 2..=3;
        spec.outputs = 1..=1;
        let archs = spec.architectures();
        assert_eq!(archs.len(), 8);
        assert!(archs.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(archs[0].to_string(), "(1,1,1),(2)");
        spec.max_free_weights = 1;
        assert!(spec.architectures().iter().all(|a| a.free_weight_count() <= 1));
    }

    #[test]
    fn empty_grid() {
        let mut spec = ScanSpec::new(field(), 1);
        spec.max_ambient = 0;
        spec.widths = 2..=3;
        assert!(scan(&spec).unwrap().is_empty());
    }

    #[test]
    fn flags_the_room_failure() {
        let mut spec = ScanSpec::new(field(), 5);
        spec.depths = 3..=3;
        spec.widths = 2..=3;
        spec.degrees = 3..=4;
        spec.outputs = 1..=1;
        let rows = scan(&spec).unwrap();
        let row = rows.iter().find(|r| r.arch.to_string() == "(2,3,2,1),(3,3)").unwrap();
        assert!(row.report.as_ref().unwrap().defective);
        assert_eq!(row.verdict, Some(VerdictKind::RoomFails(1)));
        assert!(row.agreement);
    }

    #[test]
    fn schedule_does_not_change_rows() {
        let mut spec = ScanSpec::new(field(), 11);
        spec.depths = 2..=2;
        spec.widths = 1..=3;
        spec.degrees = 2..=3;
        spec.threads = Some(1);
        let serial = scan(&spec).unwrap();
        spec.threads = Some(4);
        assert_eq!(serial, scan(&spec).unwrap());
    }
}
