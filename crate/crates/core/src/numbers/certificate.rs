use serde::{Deserialize, Serialize};

use super::engine::compute_number;
use super::{Limits, NumberQuery};
use crate::coloring::{Coloring, SetColoring, TableColoring};
use crate::error::{Error, Result};
use crate::witness::{find_brauer, find_fs_system, find_mono_ap, find_union_blocks};

pub const CERTIFICATE_SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Claim {
    LowerBound,
    UpperBound,
    Exact,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub pruned: u64,
    /// Length of the deepest avoiding coloring found.
    pub deepest: usize,
    pub shards: usize,
    pub shard_depth: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    /// Avoiding coloring of `[value - 1]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coloring: Option<TableColoring>,
    /// Avoiding coloring of `P^+([value - 1])`, for `Hind`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set_coloring: Option<SetColoring>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub statement: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<SearchStats>,
    /// Independent checks the engine ran before emitting the certificate.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: u32,
    pub query: NumberQuery,
    pub claim: Claim,
    pub value: u64,
    pub evidence: Evidence,
    pub timestamp: String,
    pub engine_version: String,
}

impl Certificate {
    pub fn new(query: NumberQuery, claim: Claim, value: u64, evidence: Evidence) -> Self {
        Certificate {
            schema: CERTIFICATE_SCHEMA,
            query,
            claim,
            value,
            evidence,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            engine_version: concat!("apsum ", env!("CARGO_PKG_VERSION")).to_string(),
        }
    }

    /// Claims the number is at least `value`.
    pub fn bounds_below(&self) -> bool {
        matches!(self.claim, Claim::LowerBound | Claim::Exact)
    }

    /// Claims the number is at most `value`.
    pub fn bounds_above(&self) -> bool {
        matches!(self.claim, Claim::UpperBound | Claim::Exact)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub problems: Vec<String>,
    /// The upper bound was re-established by a fresh exhaustive search.
    pub exhaustion_rechecked: bool,
}

impl CertificateReport {
    pub fn is_valid(&self) -> bool {
        self.problems.is_empty()
    }
}

fn check_lower_evidence(cert: &Certificate, report: &mut CertificateReport) -> Result<()> {
    let q = &cert.query;
    let want = cert.value as usize - 1;
    if q.colors_sets() {
        if want == 0 {
            return Ok(());
        }
        let sc = cert
            .evidence
            .set_coloring
            .as_ref()
            .ok_or_else(|| Error::parse("lower bound needs a set_coloring"))?;
        if sc.m() != want {
            report.problems.push(format!(
                "evidence colors P^+([{}]), expected [{want}]",
                sc.m()
            ));
        }
        if sc.colors() > q.colors() {
            report.problems.push(format!(
                "evidence allows {} colors, query has {}",
                sc.colors(),
                q.colors()
            ));
        }
        let NumberQuery::Hind { n, .. } = *q else {
            unreachable!()
        };
        if let Some(w) = find_union_blocks(sc, n)? {
            report.problems.push(format!(
                "evidence contains blocks {:?} colored {}",
                w.blocks, w.gamma
            ));
        }
        return Ok(());
    }
    let t = cert
        .evidence
        .coloring
        .as_ref()
        .ok_or_else(|| Error::parse("lower bound needs a coloring"))?;
    if t.len() != want {
        report
            .problems
            .push(format!("evidence colors [{}], expected [{want}]", t.len()));
    }
    if t.colors() > q.colors() {
        report.problems.push(format!(
            "evidence allows {} colors, query has {}",
            t.colors(),
            q.colors()
        ));
    }
    let found = match *q {
        NumberQuery::W { l, .. } => find_mono_ap(t, l)?
            .map(|w| format!("progression {} colored {}", w.progression, w.gamma)),
        NumberQuery::Wb { l, .. } => {
            find_brauer(t, l)?.map(|w| format!("Brauer {} colored {}", w.progression, w.gamma))
        }
        NumberQuery::F { n, l, .. } => find_fs_system(t, n, l, false)?.map(|w| {
            let qs: Vec<String> = w.progressions.iter().map(ToString::to_string).collect();
            format!("FS system [{}] colored {}", qs.join(", "), w.gamma)
        }),
        NumberQuery::Hind { .. } => unreachable!(),
    };
    if let Some(found) = found {
        report
            .problems
            .push(format!("evidence contains a witness: {found}"));
    }
    Ok(())
}

/// Re-check a certificate. Lower bounds are re-verified from the stored
/// evidence; with `rerun`, upper bounds are re-established by a fresh
/// exhaustive search under `limits`.
pub fn verify_certificate(cert: &Certificate, rerun: Option<&Limits>) -> Result<CertificateReport> {
    if cert.schema != CERTIFICATE_SCHEMA {
        return Err(Error::parse(format!(
            "unsupported certificate schema {}",
            cert.schema
        )));
    }
    cert.query.validate()?;
    let mut report = CertificateReport::default();
    if cert.value == 0 {
        report.problems.push("value must be positive".into());
        return Ok(report);
    }
    if cert.bounds_below() {
        check_lower_evidence(cert, &mut report)?;
    }
    if let (true, Some(limits)) = (cert.bounds_above(), rerun) {
        let fresh = compute_number(&cert.query, limits)?;
        match fresh.claim {
            Claim::Exact if fresh.value == cert.value => report.exhaustion_rechecked = true,
            Claim::Exact if cert.claim == Claim::UpperBound && fresh.value <= cert.value => {
                report.exhaustion_rechecked = true
            }
            Claim::Exact => report.problems.push(format!(
                "fresh exhaustive search gives {}, not {}",
                fresh.value, cert.value
            )),
            _ if fresh.value > cert.value => report.problems.push(format!(
                "fresh search found an avoiding coloring certifying >= {}",
                fresh.value
            )),
            _ => report
                .problems
                .push("fresh search ran out of budget before exhaustion".into()),
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w32(evidence: &str) -> Certificate {
        let ev = Evidence {
            coloring: Some(TableColoring::parse(evidence, Some(2)).unwrap()),
            ..Evidence::default()
        };
        Certificate::new(NumberQuery::W { l: 3, c: 2 }, Claim::LowerBound, 9, ev)
    }

    #[test]
    fn lower_bound_certificates() {
        assert!(verify_certificate(&w32("12211221"), None)
            .unwrap()
            .is_valid());
        assert!(!verify_certificate(&w32("11111111"), None)
            .unwrap()
            .is_valid());
        assert!(!verify_certificate(&w32("1221122"), None)
            .unwrap()
            .is_valid());
        let mut missing = w32("12211221");
        missing.evidence.coloring = None;
        assert!(matches!(
            verify_certificate(&missing, None),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn computed_certificates_verify_with_rerun() {
        let limits = Limits::default();
        for q in [
            NumberQuery::W { l: 3, c: 2 },
            NumberQuery::F { n: 1, l: 3, c: 2 },
            NumberQuery::Hind { n: 2, c: 1 },
            NumberQuery::Hind { n: 1, c: 2 },
        ] {
            let cert = compute_number(&q, &limits).unwrap();
            let r = verify_certificate(&cert, Some(&limits)).unwrap();
            assert!(r.is_valid() && r.exhaustion_rechecked, "{q}: {r:?}");
        }
        let mut wrong = compute_number(&NumberQuery::W { l: 3, c: 2 }, &limits).unwrap();
        wrong.value = 10;
        wrong.evidence.coloring = Some(TableColoring::parse("122112211", Some(2)).unwrap());
        let r = verify_certificate(&wrong, Some(&limits)).unwrap();
        assert!(!r.is_valid());
    }

    #[test]
    fn json_shape() {
        let cert = w32("12211221");
        let v = serde_json::to_value(&cert).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["query"]["kind"], "W");
        assert_eq!(v["claim"], "lower-bound");
        assert_eq!(v["evidence"]["coloring"]["table"], "12211221");
        let back: Certificate = serde_json::from_value(v).unwrap();
        assert_eq!(back, cert);
    }
}
