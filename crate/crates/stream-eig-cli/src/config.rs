//! Experiment configuration file: a flat JSON document mirroring
//! `ExperimentConfig`, with named spectrum presets. Unknown keys are
//! rejected; every harness invariant is enforced at load time.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use serde::Deserialize;
use stream_eig::harness::{default_checkpoints, preset_spectrum, ExperimentConfig, Source};
use stream_eig::{ExtremeSide, ScheduleParams, SchemeKind};

/// Spectrum given either as a preset name or an explicit ascending list.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum SpectrumSpec {
    Preset(String),
    Values(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SourceName {
    #[default]
    Gaussian,
    FixedDataset,
    Csv,
}

fn one_f64() -> f64 {
    1.0
}

fn two_f64() -> f64 {
    2.0
}

fn one_u32() -> u32 {
    1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CliConfigFile {
    pub scheme: SchemeKind,
    pub variant: ExtremeSide,
    pub spectrum: SpectrumSpec,
    #[serde(default)]
    pub d: Option<usize>,
    #[serde(default = "one_f64")]
    pub c: f64,
    #[serde(default = "one_f64")]
    pub alpha: f64,
    #[serde(default)]
    pub n0: u64,
    #[serde(default = "two_f64")]
    pub amnesic_l: f64,
    pub n_total: u64,
    #[serde(default = "one_u32")]
    pub replicates: u32,
    #[serde(default)]
    pub checkpoints: Option<Vec<u64>>,
    pub seed: u64,
    #[serde(default)]
    pub source: SourceName,
    #[serde(default)]
    pub csv_path: Option<PathBuf>,
    #[serde(default)]
    pub literal_svd: bool,
}

impl CliConfigFile {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("invalid config {}", path.display()))
    }

    /// Resolves presets and defaults into a validated harness configuration.
    pub fn resolve(self) -> anyhow::Result<ExperimentConfig> {
        let spectrum = match self.spectrum {
            SpectrumSpec::Preset(name) => preset_spectrum(&name)
                .ok_or_else(|| anyhow!("unknown spectrum preset {name:?} (try \"paper4\" or \"smallest-id\")"))?,
            SpectrumSpec::Values(v) => v,
        };
        let d = self.d.unwrap_or(spectrum.len());
        if d != spectrum.len() {
            bail!("d = {d} does not match the {}-entry spectrum", spectrum.len());
        }
        let source = match self.source {
            SourceName::Gaussian => Source::Gaussian,
            SourceName::FixedDataset => Source::FixedDataset,
            SourceName::Csv => Source::Csv(
                self.csv_path
                    .clone()
                    .ok_or_else(|| anyhow!("source \"csv\" requires csv_path"))?,
            ),
        };
        let checkpoints = match self.checkpoints {
            Some(c) => c,
            None => default_checkpoints(self.n_total),
        };
        let config = ExperimentConfig {
            scheme: self.scheme,
            variant: self.variant,
            d,
            spectrum,
            schedule: ScheduleParams::new(self.c, self.alpha, self.n0),
            amnesic_l: self.amnesic_l,
            n_total: self.n_total,
            replicates: self.replicates,
            checkpoints,
            seed: self.seed,
            source,
            literal_svd: self.literal_svd,
        };
        config.validate()?;
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(json: &str) -> anyhow::Result<ExperimentConfig> {
        let file: CliConfigFile = serde_json::from_str(json)?;
        file.resolve()
    }

    #[test]
    fn minimal_preset_config() {
        let cfg = parse(
            r#"{"scheme":"krasulina","variant":"largest","spectrum":"paper4",
                "n_total":1000,"seed":7}"#,
        )
        .unwrap();
        assert_eq!(cfg.d, 10);
        assert_eq!(cfg.replicates, 1);
        assert_eq!(cfg.schedule, ScheduleParams::default());
        assert_eq!(cfg.checkpoints.last(), Some(&1000));
    }

    #[test]
    fn explicit_spectrum_config() {
        let cfg = parse(
            r#"{"scheme":"oja","variant":"largest","spectrum":[0.5,1.0,2.0],
                "n_total":100,"seed":0,"c":0.5,"alpha":0.75,"replicates":3}"#,
        )
        .unwrap();
        assert_eq!(cfg.d, 3);
        assert_eq!(cfg.schedule.alpha, 0.75);
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = parse(
            r#"{"scheme":"oja","variant":"largest","spectrum":"paper4",
                "n_total":10,"seed":0,"bogus":1}"#,
        )
        .unwrap_err();
        assert!(format!("{err:#}").contains("bogus"));
    }

    #[test]
    fn invariants_enforced_at_load() {
        // paper4 has a degenerate bottom gap.
        assert!(parse(
            r#"{"scheme":"krasulina","variant":"smallest","spectrum":"paper4",
                "n_total":10,"seed":0}"#
        )
        .is_err());
        // Inadmissible schedule.
        assert!(parse(
            r#"{"scheme":"krasulina","variant":"largest","spectrum":"paper4",
                "n_total":10,"seed":0,"alpha":0.4}"#
        )
        .is_err());
        // csv source needs a path.
        assert!(parse(
            r#"{"scheme":"krasulina","variant":"largest","spectrum":"paper4",
                "n_total":10,"seed":0,"source":"csv"}"#
        )
        .is_err());
        // d / spectrum mismatch.
        assert!(parse(
            r#"{"scheme":"krasulina","variant":"largest","spectrum":"paper4",
                "d":4,"n_total":10,"seed":0}"#
        )
        .is_err());
    }
}
