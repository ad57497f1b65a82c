//! Line-oriented report formats: JSONL triple records and the CSV leaderboard.
//!
//! Floating point quantities are written as fixed six-decimal strings so a
//! report is reproducible byte for byte and survives a parse/recompute cycle.

use serde::{Deserialize, Serialize};

use crate::arith::{kappa1, metrics, radical, Triple, DEFAULT_TRIAL_BOUND};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleRecord {
    pub x: u128,
    pub y: u128,
    pub z: u128,
    #[serde(rename = "S")]
    pub s: u128,
    #[serde(rename = "H")]
    pub h: u128,
    #[serde(rename = "R")]
    pub r: u128,
    /// `null` when `H < 3`
    pub kappa0: Option<String>,
    pub kappa1: String,
    /// `null` when `H < 3`
    pub qstar: Option<String>,
    pub primitive: bool,
}

pub fn decimal6(v: f64) -> String {
    let s = format!("{v:.6}");
    // keep "-0.000000" out of reports
    if s.trim_start_matches('-')
        .bytes()
        .all(|b| b == b'0' || b == b'.')
    {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

impl TripleRecord {
    pub fn from_triple(t: &Triple) -> Result<Self> {
        let (kappa0, qstar) = match metrics::<f64>(t) {
            Ok(m) => (Some(decimal6(m.kappa0)), Some(decimal6(m.qstar))),
            Err(Error::HeightTooSmall(_)) => (None, None),
            Err(e) => return Err(e),
        };
        Ok(TripleRecord {
            x: t.x,
            y: t.y,
            z: t.z,
            s: t.smoothness(),
            h: t.height(),
            r: radical(t)?,
            kappa0,
            kappa1: decimal6(kappa1::<f64>(t)?),
            qstar,
            primitive: t.primitive,
        })
    }
}

fn json_error(e: serde_json::Error) -> Error {
    Error::InvalidArgument(format!("malformed record: {e}"))
}

pub fn jsonl(triples: &[Triple]) -> Result<String> {
    let mut out = String::new();
    for t in triples {
        out.push_str(&serde_json::to_string(&TripleRecord::from_triple(t)?).map_err(json_error)?);
        out.push('\n');
    }
    Ok(out)
}

pub fn parse_jsonl(text: &str) -> Result<Vec<TripleRecord>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(json_error))
        .collect()
}

/// Parses a JSONL report, rebuilds each triple from `(x, y)` and rewrites the
/// report; `true` when the result equals the input byte for byte.
pub fn round_trips(text: &str) -> Result<bool> {
    let triples = parse_jsonl(text)?
        .into_iter()
        .map(|r| Triple::from_sum(r.x, r.y, DEFAULT_TRIAL_BOUND))
        .collect::<Result<Vec<_>>>()?;
    Ok(jsonl(&triples)? == text)
}

pub const LEADERBOARD_HEADER: &str = "S,x,y,z,kappa0,qstar";

/// CSV leaderboard sorted by ascending `κ₀` (ties by `(z, x)`); triples with
/// `H < 3` have no `κ₀` and are left out.
pub fn leaderboard_csv(triples: &[Triple]) -> Result<String> {
    let mut rows = Vec::with_capacity(triples.len());
    for t in triples {
        match metrics::<f64>(t) {
            Ok(m) => rows.push((m.kappa0, m.qstar, t)),
            Err(Error::HeightTooSmall(_)) => {}
            Err(e) => return Err(e),
        }
    }
    rows.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then((a.2.z, a.2.x).cmp(&(b.2.z, b.2.x)))
    });
    let mut out = String::from(LEADERBOARD_HEADER);
    out.push('\n');
    for (k0, q, t) in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            t.smoothness(),
            t.x,
            t.y,
            t.z,
            decimal6(k0),
            decimal6(q)
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triple(x: u128, y: u128) -> Triple {
        Triple::from_sum(x, y, DEFAULT_TRIAL_BOUND).unwrap()
    }

    #[test]
    fn record_layout() {
        let line = jsonl(&[triple(1, 8)]).unwrap();
        assert_eq!(
            line,
            "{\"x\":1,\"y\":8,\"z\":9,\"S\":3,\"H\":9,\"R\":6,\"kappa0\":\"1.395604\",\
             \"kappa1\":\"0.815465\",\"qstar\":\"1.074804\",\"primitive\":true}\n"
        );
        let small = jsonl(&[triple(1, 1)]).unwrap();
        assert!(small.contains("\"kappa0\":null") && small.contains("\"qstar\":null"));
    }

    #[test]
    fn round_trip() {
        let ts = vec![triple(1, 1), triple(1, 8), triple(3, 125), triple(2, 2)];
        let text = jsonl(&ts).unwrap();
        assert!(round_trips(&text).unwrap());
        let tampered = text.replace("1.395604", "1.395605");
        assert!(!round_trips(&tampered).unwrap());
        assert!(round_trips("not json").is_err());
    }

    #[test]
    fn leaderboard_order() {
        let csv = leaderboard_csv(&[triple(1, 8), triple(1, 4374), triple(1, 1), triple(3, 125)])
            .unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], LEADERBOARD_HEADER);
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("7,1,4374,4375,0.915"));
        assert!(lines[3].starts_with("3,1,8,9,1.3956"));
    }

    #[test]
    fn negative_zero_is_normalised() {
        assert_eq!(decimal6(-1e-9), "0.000000");
        assert_eq!(decimal6(-0.5), "-0.500000");
    }
}
