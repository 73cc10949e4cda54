pub mod features;
pub mod filters;
pub mod forecast;
pub mod simulate;
pub mod transform;

use std::fmt;
use std::str::FromStr;

use wavecast::featureset::SelectorSpec;

/// Selector names as written in flags and config files.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectorKind {
    None,
    RidgeTopk,
    PcaTopk,
}

impl SelectorKind {
    pub fn spec(self, k: usize, alpha: f64) -> Option<SelectorSpec> {
        match self {
            SelectorKind::None => None,
            SelectorKind::RidgeTopk => Some(SelectorSpec::RidgeTopk { k, alpha }),
            SelectorKind::PcaTopk => Some(SelectorSpec::PcaTopk { k }),
        }
    }
}

impl FromStr for SelectorKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "none" => Ok(SelectorKind::None),
            "ridge-topk" => Ok(SelectorKind::RidgeTopk),
            "pca-topk" => Ok(SelectorKind::PcaTopk),
            other => Err(format!(
                "unknown selector '{other}' (supported: none, ridge-topk, pca-topk)"
            )),
        }
    }
}

impl fmt::Display for SelectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SelectorKind::None => "none",
            SelectorKind::RidgeTopk => "ridge-topk",
            SelectorKind::PcaTopk => "pca-topk",
        })
    }
}
