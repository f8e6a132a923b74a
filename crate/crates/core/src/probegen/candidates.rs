//! Keyword-based onion candidate generation and offline membership checks.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ProbeError;
use crate::ingest::{classify_domain, is_base32, AddressKind, Dataset, Domain, ONION_V2_LEN, ONION_V3_LEN};

const BASE32: &[u8; 32] = b"abcdefghijklmnopqrstuvwxyz234567";

/// Where the keyword sits inside the address body.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Position {
    Prefix,
    Suffix,
    Anywhere,
}

impl std::str::FromStr for Position {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "prefix" => Ok(Position::Prefix),
            "suffix" => Ok(Position::Suffix),
            "anywhere" => Ok(Position::Anywhere),
            _ => Err(format!("unknown position '{s}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateSpec {
    pub keyword: String,
    /// `OnionV2` or `OnionV3`.
    pub kind: AddressKind,
    pub position: Position,
    pub count: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateBatch {
    pub domains: Vec<Domain>,
    /// Fewer than `count` distinct addresses exist for this keyword and position.
    pub exhausted: bool,
}

/// Consecutive duplicate draws tolerated before giving up on `Anywhere` specs.
const MAX_STALE_DRAWS: usize = 10_000;

/// Generates `count` distinct onion addresses containing the keyword.
///
/// Bodies are lookup keys only; no key material stands behind them. When the
/// keyword leaves too little room for `count` distinct bodies, every distinct
/// body that can be produced is returned and `exhausted` is set.
pub fn generate_candidates(spec: &CandidateSpec) -> Result<CandidateBatch, ProbeError> {
    let body_len = match spec.kind {
        AddressKind::OnionV2 => ONION_V2_LEN,
        AddressKind::OnionV3 => ONION_V3_LEN,
        other => return Err(ProbeError::InvalidSpec(format!("cannot generate {other} candidates"))),
    };
    if !is_base32(&spec.keyword) {
        return Err(ProbeError::InvalidKeyword(spec.keyword.clone()));
    }
    let free = body_len
        .checked_sub(spec.keyword.len())
        .ok_or_else(|| ProbeError::KeywordTooLong {
            keyword: spec.keyword.clone(),
            max: body_len,
        })?;

    // Exact space size for fixed placements; Anywhere is only bounded by draws.
    let capacity = match spec.position {
        Position::Prefix | Position::Suffix => 32usize.checked_pow(free as u32),
        Position::Anywhere if free == 0 => Some(1),
        Position::Anywhere => None,
    };
    let target = capacity.map_or(spec.count, |c| c.min(spec.count));

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut seen = HashSet::with_capacity(target);
    let mut domains = Vec::with_capacity(target);
    let mut stale = 0;
    while domains.len() < target && stale < MAX_STALE_DRAWS {
        let offset = match spec.position {
            Position::Prefix => 0,
            Position::Suffix => free,
            Position::Anywhere => rng.gen_range(0..=free),
        };
        let mut body: Vec<u8> = (0..body_len)
            .map(|_| BASE32[rng.gen_range(0..BASE32.len())])
            .collect();
        body[offset..offset + spec.keyword.len()].copy_from_slice(spec.keyword.as_bytes());
        let name = format!("{}.onion", String::from_utf8(body).expect("base32 is ascii"));
        if seen.insert(name.clone()) {
            stale = 0;
            domains.push(classify_domain(&name).expect("generated onion classifies"));
        } else {
            stale += 1;
        }
    }
    Ok(CandidateBatch {
        exhausted: domains.len() < spec.count,
        domains,
    })
}

/// Candidates that appear among the known dataset's nodes, in input order.
pub fn check_membership(candidates: &[Domain], known: &Dataset) -> Vec<Domain> {
    candidates
        .iter()
        .filter(|c| known.contains(c))
        .cloned()
        .collect()
}
