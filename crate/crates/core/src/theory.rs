//! Expected dimensions, the room condition, the Alexander–Hirschowitz table
//! of defective Veronese secants, and the resulting verdicts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::binomial;
use crate::network::Architecture;

/// `min(sum_i n_i (n_{i-1} - 1), n_L * binom(n_0 - 1 + D, n_0 - 1) - n_L)`.
pub fn expected_dim_general(arch: &Architecture) -> u128 {
    (arch.free_weight_count() as u128).min(arch.affine_target_dim())
}

/// Refined expected dimension for single-output networks: the general bound
/// capped additionally by the dimension the last Veronese can span on top of
/// the lower-level parameters.
pub fn expected_dim_single_output(arch: &Architecture) -> Result<u128> {
    if arch.outputs() != 1 {
        return Err(Error::NotSingleOutput { outputs: arch.outputs() });
    }
    let l = arch.depth();
    if l < 2 {
        return Err(Error::TooShallow);
    }
    let params = arch.free_weight_count() as u128;
    let lower: u128 = (1..=l - 2).map(|i| (arch.width(i) * (arch.width(i - 1) - 1)) as u128).sum();
    let n = arch.width(l - 2) as u64;
    let span = binomial(n - 1 + arch.degree(l - 1) as u64, n - 1);
    Ok(params.min(lower.saturating_add(span)).min(arch.affine_target_dim()))
}

/// The expected dimension that defectiveness is judged against: refined when
/// it is defined (single output, `L >= 2`), general otherwise.
pub fn applicable_expected_dim(arch: &Architecture) -> u128 {
    expected_dim_single_output(arch).unwrap_or_else(|_| expected_dim_general(arch))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoomRecord {
    pub layer: usize,
    pub lhs: u128,
    pub rhs: u128,
    pub holds: bool,
}

/// Per-layer records of `n_{i-1} + n_i - 1 < binom(n_{i-1} - 1 + d_i, n_{i-1} - 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoomCheck {
    pub records: Vec<RoomRecord>,
}

impl RoomCheck {
    pub fn holds(&self) -> bool {
        self.records.iter().all(|r| r.holds)
    }

    pub fn first_failure(&self) -> Option<usize> {
        self.records.iter().find(|r| !r.holds).map(|r| r.layer)
    }
}

pub fn room_condition(arch: &Architecture) -> RoomCheck {
    let records = (1..arch.depth())
        .map(|i| {
            let prev = arch.width(i - 1) as u64;
            let lhs = (prev + arch.width(i) as u64 - 1) as u128;
            let rhs = binomial(prev - 1 + arch.degree(i) as u64, prev - 1);
            RoomRecord { layer: i, lhs, rhs, holds: lhs < rhs }
        })
        .collect();
    RoomCheck { records }
}

/// Whether `Sec_s` of the degree-`deg` Veronese embedding of `P^{nvars-1}`
/// is defective, per the Alexander–Hirschowitz classification. Degree 1 and
/// `s = 1` are never defective.
pub fn ah_secant_defective(nvars: usize, deg: u32, s: usize) -> bool {
    if deg == 2 {
        return nvars >= 3 && s >= 2 && s < nvars;
    }
    matches!((nvars, deg, s), (3, 4, 5) | (4, 4, 9) | (5, 3, 8))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictKind {
    PredictedNonDefective,
    PredictedIdentifiable,
    RoomFails(usize),
    LastVeroneseDefective,
    FillingCaseUnresolved,
    Inconclusive,
}

impl VerdictKind {
    /// Stable label used in reports.
    pub fn label(&self) -> String {
        match self {
            VerdictKind::PredictedNonDefective => "PredictedNonDefective".into(),
            VerdictKind::PredictedIdentifiable => "PredictedIdentifiable".into(),
            VerdictKind::RoomFails(i) => format!("RoomFails({i})"),
            VerdictKind::LastVeroneseDefective => "LastVeroneseDefective".into(),
            VerdictKind::FillingCaseUnresolved => "FillingCaseUnresolved".into(),
            VerdictKind::Inconclusive => "Inconclusive".into(),
        }
    }

    /// True for the verdicts that predict the expected dimension.
    pub fn predicts_expected_dim(&self) -> bool {
        matches!(self, VerdictKind::PredictedNonDefective | VerdictKind::PredictedIdentifiable)
    }

    /// True for the failed-condition verdicts of a single-output network.
    pub fn condition_failed(&self) -> bool {
        matches!(self, VerdictKind::RoomFails(_) | VerdictKind::LastVeroneseDefective)
    }
}

/// Inputs and output of the secant-defectiveness lookup for the last layer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecantLookup {
    pub nvars: usize,
    pub degree: u32,
    pub secant_order: usize,
    pub defective: bool,
}

/// Arithmetic of the extra condition for multi-output networks: the refined
/// expected dimension of the single-output truncation against its parameter
/// count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FillingCheck {
    pub single_output_expdim: u128,
    pub parameter_count: u128,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub room: RoomCheck,
    pub secant: SecantLookup,
    pub filling: Option<FillingCheck>,
}

/// Evaluates the sufficient conditions for the expected dimension
/// (single output) or global identifiability (several outputs).
pub fn theorem_verdict(arch: &Architecture) -> Result<Verdict> {
    let l = arch.depth();
    if l < 2 {
        return Err(Error::TooShallow);
    }
    let room = room_condition(arch);
    let secant = SecantLookup {
        nvars: arch.width(l - 2),
        degree: arch.degree(l - 1),
        secant_order: arch.width(l - 1),
        defective: ah_secant_defective(arch.width(l - 2), arch.degree(l - 1), arch.width(l - 1)),
    };
    let filling = (arch.outputs() >= 2).then(|| {
        let single = arch.with_outputs(1);
        let single_output_expdim = expected_dim_single_output(&single).expect("single output with L >= 2");
        let parameter_count = single.free_weight_count() as u128;
        FillingCheck { single_output_expdim, parameter_count, holds: single_output_expdim == parameter_count }
    });
    let kind = if let Some(i) = room.first_failure() {
        VerdictKind::RoomFails(i)
    } else if secant.defective {
        VerdictKind::LastVeroneseDefective
    } else {
        match &filling {
            None => VerdictKind::PredictedNonDefective,
            Some(f) if f.holds => VerdictKind::PredictedIdentifiable,
            Some(_) => VerdictKind::FillingCaseUnresolved,
        }
    };
    Ok(Verdict { kind, room, secant, filling })
}

/// Scope in which the failed-condition verdicts of a single-output network
/// are expected to force defectiveness: the parameter count stays strictly
/// below the projective dimension of the ambient space, so the network
/// cannot fill it.
pub fn in_necessity_scope(arch: &Architecture) -> bool {
    arch.outputs() == 1 && arch.depth() >= 2 && (arch.free_weight_count() as u128) < arch.affine_target_dim()
}
