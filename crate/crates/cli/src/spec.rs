//! Channel spec files: one JSON object per file.
//!
//! ```json
//! {"type": "bsc", "p": 0.11}
//! {"type": "bec", "e": 0.3, "label": "erasure"}
//! {"type": "rows", "row0": [0.6, 0.3, 0.1], "row1": [0.1, 0.3, 0.6]}
//! {"type": "pairs", "pairs": [[0.35, 0.05], [0.2, 0.2], [0.12, 0.08]]}
//! ```

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use biso_core::BisoChannel;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
pub struct ChannelSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(flatten)]
    pub kind: Kind,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Kind {
    Bsc { p: f64 },
    Bec { e: f64 },
    Rows { row0: Vec<f64>, row1: Vec<f64> },
    Pairs { pairs: Vec<(f64, f64)> },
}

/// Malformed spec text, as opposed to a well-formed spec describing an
/// invalid channel.
#[derive(Debug, thiserror::Error)]
#[error("{path}: {inner}")]
pub struct ParseError {
    pub path: String,
    pub inner: serde_json::Error,
}

impl ChannelSpec {
    pub fn parse(text: &str, path: &str) -> Result<Self, ParseError> {
        serde_json::from_str(text).map_err(|inner| ParseError {
            path: path.to_string(),
            inner,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Ok(Self::parse(&text, &path.display().to_string())?)
    }

    pub fn build(&self) -> biso_core::Result<BisoChannel> {
        let ch = match &self.kind {
            Kind::Bsc { p } => BisoChannel::bsc(*p)?,
            Kind::Bec { e } => BisoChannel::bec(*e)?,
            Kind::Rows { row0, row1 } => BisoChannel::from_rows(row0, row1)?,
            Kind::Pairs { pairs } => BisoChannel::from_pairs(pairs.iter().copied())?,
        };
        Ok(match &self.label {
            Some(l) => ch.with_label(l.clone()),
            None if ch.label().is_empty() => ch.with_label(self.default_label()),
            None => ch,
        })
    }

    fn default_label(&self) -> String {
        match &self.kind {
            Kind::Bsc { p } => format!("BSC({p})"),
            Kind::Bec { e } => format!("BEC({e})"),
            Kind::Rows { .. } => "rows".into(),
            Kind::Pairs { .. } => "pairs".into(),
        }
    }

    /// The member of this spec's family with capacity `c`, if the family is
    /// a one-parameter BSC or BEC family.
    pub fn rescaled(&self, c: f64) -> Option<biso_core::Result<BisoChannel>> {
        let ch = match self.kind {
            Kind::Bsc { .. } => BisoChannel::bsc_with_capacity(c),
            Kind::Bec { .. } => BisoChannel::bec_with_capacity(c),
            _ => return None,
        };
        Some(ch.map(|ch| match &self.label {
            Some(l) => ch.with_label(l.clone()),
            None => ch,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_variants_parse() {
        let cases = [
            r#"{"type": "bsc", "p": 0.11}"#,
            r#"{"type": "bec", "e": 0.3, "label": "erasure"}"#,
            r#"{"type": "rows", "row0": [0.6, 0.3, 0.1], "row1": [0.1, 0.3, 0.6]}"#,
            r#"{"type": "pairs", "pairs": [[0.35, 0.05], [0.2, 0.2], [0.12, 0.08]]}"#,
        ];
        for text in cases {
            let spec = ChannelSpec::parse(text, "inline").unwrap();
            spec.build().unwrap();
        }
        let spec = ChannelSpec::parse(cases[1], "inline").unwrap();
        assert_eq!(spec.build().unwrap().label(), "erasure");
    }

    #[test]
    fn parse_errors_name_the_field() {
        let err = ChannelSpec::parse(r#"{"type": "bsc"}"#, "x.json").unwrap_err();
        assert!(err.to_string().contains("missing field `p`"), "{err}");
        let err = ChannelSpec::parse("{\n  \"type\": \"bsc\",\n  \"p\": oops }", "x.json").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        assert!(ChannelSpec::parse(r#"{"type": "awgn", "snr": 1}"#, "x.json").is_err());
    }

    #[test]
    fn invalid_channels_are_build_errors() {
        let spec = ChannelSpec::parse(r#"{"type": "bsc", "p": -0.2}"#, "x").unwrap();
        assert!(spec.build().is_err());
        let spec = ChannelSpec::parse(r#"{"type": "rows", "row0": [0.7, 0.3], "row1": [0.2, 0.8]}"#, "x").unwrap();
        assert!(spec.build().is_err());
    }

    #[test]
    fn rescaling_families() {
        let bsc = ChannelSpec::parse(r#"{"type": "bsc", "p": 0.3}"#, "x").unwrap();
        let ch = bsc.rescaled(0.4).unwrap().unwrap();
        assert!((ch.capacity() - 0.4).abs() < 1e-12);
        let pairs = ChannelSpec::parse(r#"{"type": "pairs", "pairs": [[0.5, 0.5]]}"#, "x").unwrap();
        assert!(pairs.rescaled(0.4).is_none());
    }
}
