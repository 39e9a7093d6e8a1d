//! Simulated client-server rounds.
//!
//! The estimator is the server and each oracle is a client. One call to
//! [`RoundHarness::execute`] is one synchronous round: every client answers
//! its sample requests and membership queries from its own random stream,
//! and the exchange is appended to the transcript.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::element::ElementId;
use crate::error::{Error, Result};
use crate::oracle::OracleList;
use crate::rng::SeedTree;

/// Default refusal threshold on logical queries per round.
pub const DEFAULT_QUERY_CAP: u64 = 100_000_000;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleRequest {
    pub samples: u64,
    pub queries: Arc<[ElementId]>,
}

impl OracleRequest {
    pub fn is_empty(&self) -> bool {
        self.samples == 0 && self.queries.is_empty()
    }
}

/// One batch from the server, indexed by oracle.
///
/// `queries` holds the physical (deduplicated) membership batch; the
/// logical count the algorithm is charged for is carried separately.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRequest {
    pub per_oracle: Vec<OracleRequest>,
    pub logical_queries: u64,
}

impl RoundRequest {
    pub fn new(m: usize) -> Self {
        RoundRequest {
            per_oracle: vec![OracleRequest::default(); m],
            logical_queries: 0,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.per_oracle.iter().all(OracleRequest::is_empty)
    }

    pub fn physical_queries(&self) -> u64 {
        self.per_oracle.iter().map(|r| r.queries.len() as u64).sum()
    }

    pub fn samples(&self) -> u64 {
        self.per_oracle.iter().map(|r| r.samples).sum()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleAnswer {
    pub samples: Vec<ElementId>,
    pub members: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundAnswers {
    pub per_oracle: Vec<OracleAnswer>,
}

impl RoundAnswers {
    fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        for a in &self.per_oracle {
            h.update((a.samples.len() as u64).to_le_bytes());
            for s in &a.samples {
                h.update(s.to_string().as_bytes());
                h.update([0]);
            }
            h.update((a.members.len() as u64).to_le_bytes());
            h.update(a.members.iter().map(|&b| b as u8).collect::<Vec<_>>());
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundTranscript {
    pub round_index: u64,
    pub seed: u64,
    pub samples: u64,
    pub logical_queries: u64,
    pub physical_queries: u64,
    /// `(samples returned, membership answers returned)` per oracle.
    pub answer_sizes: Vec<(u64, u64)>,
    pub answer_digest: String,
    pub wall_time_us: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub request: Option<RoundRequest>,
}

/// Round executor bound to one oracle list and one seed subtree.
pub struct RoundHarness<'a> {
    list: &'a OracleList,
    seeds: SeedTree,
    cap: u64,
    record_requests: bool,
    transcripts: Vec<RoundTranscript>,
}

impl<'a> RoundHarness<'a> {
    pub fn new(list: &'a OracleList, seeds: SeedTree) -> Self {
        RoundHarness {
            list,
            seeds,
            cap: DEFAULT_QUERY_CAP,
            record_requests: false,
            transcripts: Vec::new(),
        }
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    /// Keep full requests in the transcript so it can be replayed.
    pub fn recording(mut self, on: bool) -> Self {
        self.record_requests = on;
        self
    }

    pub fn rounds(&self) -> u64 {
        self.transcripts.len() as u64
    }

    pub fn transcripts(&self) -> &[RoundTranscript] {
        &self.transcripts
    }

    pub fn into_transcripts(self) -> Vec<RoundTranscript> {
        self.transcripts
    }

    pub fn execute(&mut self, req: RoundRequest) -> Result<RoundAnswers> {
        if req.per_oracle.len() != self.list.len() {
            return Err(Error::RoundRefused(format!(
                "request addresses {} oracles, list has {}",
                req.per_oracle.len(),
                self.list.len()
            )));
        }
        if req.is_empty() {
            return Err(Error::RoundRefused("empty request".into()));
        }
        if req.logical_queries > self.cap {
            return Err(Error::CapExceeded {
                what: "logical queries per round".into(),
                cap: self.cap,
            });
        }
        let index = self.rounds();
        let seeds = self.seeds.child_indexed("round", index);
        let start = clock();
        let answers = answer(self.list, &req, &seeds)?;
        let wall_time_us = start.map_or(0, |t| t.elapsed().as_micros() as u64);
        self.transcripts.push(RoundTranscript {
            round_index: index,
            seed: seeds.fingerprint(),
            samples: req.samples(),
            logical_queries: req.logical_queries,
            physical_queries: req.physical_queries(),
            answer_sizes: answers
                .per_oracle
                .iter()
                .map(|a| (a.samples.len() as u64, a.members.len() as u64))
                .collect(),
            answer_digest: answers.fingerprint(),
            wall_time_us,
            request: self.record_requests.then_some(req),
        });
        Ok(answers)
    }
}

// No monotonic clock on wasm32-unknown-unknown; rounds report zero there.
#[cfg(not(all(target_arch = "wasm32", target_os = "unknown")))]
fn clock() -> Option<std::time::Instant> {
    Some(std::time::Instant::now())
}

#[cfg(all(target_arch = "wasm32", target_os = "unknown"))]
fn clock() -> Option<std::time::Instant> {
    None
}

fn answer(list: &OracleList, req: &RoundRequest, seeds: &SeedTree) -> Result<RoundAnswers> {
    let per_oracle = req
        .per_oracle
        .iter()
        .enumerate()
        .map(|(j, r)| {
            let oracle = list.oracle(j);
            let mut rng = seeds.child_indexed("client", j as u64).rng();
            let samples = (0..r.samples)
                .map(|_| oracle.random_element(&mut rng))
                .collect::<Result<Vec<_>>>()?;
            let members = if r.queries.is_empty() {
                Vec::new()
            } else {
                oracle.contains_batch(&r.queries)
            };
            Ok(OracleAnswer { samples, members })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RoundAnswers { per_oracle })
}

/// Re-executes recorded rounds against `list` and reports, per round,
/// whether the answers match the recorded digest. Rounds recorded without
/// their request yield `None`.
pub fn replay(list: &OracleList, seeds: &SeedTree, transcripts: &[RoundTranscript]) -> Result<Vec<Option<bool>>> {
    transcripts
        .iter()
        .map(|t| match &t.request {
            None => Ok(None),
            Some(req) => {
                let a = answer(list, req, &seeds.child_indexed("round", t.round_index))?;
                Ok(Some(a.fingerprint() == t.answer_digest))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::BiasSpec;

    fn list() -> OracleList {
        OracleList::from_explicit(
            vec![(0..5).map(ElementId::Id).collect::<Vec<_>>(), (3..9).map(ElementId::Id).collect()],
            BiasSpec::ZERO,
            SeedTree::new(0),
        )
        .unwrap()
    }

    #[test]
    fn empty_request_refused() {
        let l = list();
        let mut h = RoundHarness::new(&l, SeedTree::new(1));
        assert!(matches!(h.execute(RoundRequest::new(2)), Err(Error::RoundRefused(_))));
        assert_eq!(h.rounds(), 0);
    }

    #[test]
    fn cap_refused() {
        let l = list();
        let mut h = RoundHarness::new(&l, SeedTree::new(1)).with_cap(10);
        let mut req = RoundRequest::new(2);
        req.per_oracle[0].queries = vec![ElementId::Id(1)].into();
        req.logical_queries = 11;
        assert!(matches!(h.execute(req), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn sampling_round_accounting() {
        let l = list();
        let mut h = RoundHarness::new(&l, SeedTree::new(1));
        let mut req = RoundRequest::new(2);
        req.per_oracle[0].samples = 3;
        req.per_oracle[1].samples = 4;
        let a = h.execute(req).unwrap();
        assert_eq!(h.rounds(), 1);
        assert_eq!(a.per_oracle[0].samples.len(), 3);
        assert_eq!(a.per_oracle[1].samples.len(), 4);
        assert_eq!(l.sample_count(), 7);
        assert_eq!(h.transcripts()[0].answer_sizes, vec![(3, 0), (4, 0)]);
    }

    #[test]
    fn membership_round_answers_align() {
        let l = list();
        let mut h = RoundHarness::new(&l, SeedTree::new(1));
        let mut req = RoundRequest::new(2);
        let q: Arc<[ElementId]> = vec![ElementId::Id(4), ElementId::Id(8)].into();
        req.per_oracle[0].queries = q.clone();
        req.per_oracle[1].queries = q;
        req.logical_queries = 4;
        let a = h.execute(req).unwrap();
        assert_eq!(a.per_oracle[0].members, vec![true, false]);
        assert_eq!(a.per_oracle[1].members, vec![true, true]);
        assert_eq!(h.transcripts()[0].logical_queries, 4);
    }

    #[test]
    fn replay_reproduces_answers() {
        let l = list();
        let seeds = SeedTree::new(42);
        let mut h = RoundHarness::new(&l, seeds.clone()).recording(true);
        for k in 0..3u64 {
            let mut req = RoundRequest::new(2);
            req.per_oracle[(k % 2) as usize].samples = 5 + k;
            req.per_oracle[1].queries = vec![ElementId::Id(k as i64)].into();
            req.logical_queries = 1;
            h.execute(req).unwrap();
        }
        let ok = replay(&l, &seeds, h.transcripts()).unwrap();
        assert_eq!(ok, vec![Some(true); 3]);
        let other = replay(&l, &SeedTree::new(43), h.transcripts()).unwrap();
        assert!(other.contains(&Some(false)));
    }
}
