//! JSON run configuration shared by the command-line tools.

use crate::array::maximal_spread_angle;
use crate::dictionary::{
    build_radar_dictionary_by_enumeration, build_regularized_dictionary,
    greedy_maxmin_dictionary, permute_augment, Scheme, SymbolDictionary,
};
use crate::error::{Error, Result};
use crate::pattern::PatternGrid;
use crate::signaling::{RotationMode, SchemeConfig};
use crate::sim::MonteCarloConfig;
use crate::{ArrayGeometry, ReceiveArray};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub m: usize,
    pub spacing_wavelengths: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReceiveConfig {
    pub n: usize,
    pub spacing_wavelengths: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DictMode {
    /// Greedy max-min distance selection.
    Comm,
    /// Exhaustive beampattern-ripple ranking.
    Radar,
    /// Permutation augmentation of the greedy max-min dictionary.
    Hybrid,
    /// Two-antenna subgroups, one bit each.
    Regularized,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DictionaryConfig {
    /// Construction mode; inferred from the scheme when omitted.
    #[serde(default)]
    pub mode: Option<DictMode>,
    #[serde(default = "default_dict_size")]
    pub size: usize,
    /// When set, the dictionary is loaded from this JSON file instead of
    /// being rebuilt.
    #[serde(default)]
    pub path: Option<String>,
}

impl Default for DictionaryConfig {
    fn default() -> Self {
        Self {
            mode: None,
            size: default_dict_size(),
            path: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectorConfig {
    pub min_deg: f64,
    pub max_deg: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_geometry")]
    pub geometry: GeometryConfig,
    #[serde(default = "default_receive")]
    pub receive: ReceiveConfig,
    #[serde(default = "default_scheme")]
    pub scheme: Scheme,
    /// Active bits per symbol; full dictionary rate when omitted.
    #[serde(default)]
    pub bits_per_symbol: Option<u32>,
    /// Selected antennas per pulse; defaults to M/2.
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default = "default_theta_c_deg")]
    pub theta_c_deg: f64,
    #[serde(default)]
    pub dictionary: DictionaryConfig,
    #[serde(default = "default_mainlobe")]
    pub mainlobe: SectorConfig,
    #[serde(default = "default_sidelobe_db")]
    pub sidelobe_db: f64,
    #[serde(default = "default_snr_grid")]
    pub snr_grid_db: Vec<f64>,
    #[serde(default = "default_num_symbols")]
    pub num_symbols: u64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_prf_hz")]
    pub prf_hz: f64,
    #[serde(default = "default_sigma_grid")]
    pub sigma_grid_deg: Vec<f64>,
    #[serde(default = "default_trials")]
    pub trials: u64,
}

fn default_geometry() -> GeometryConfig {
    GeometryConfig {
        m: 16,
        spacing_wavelengths: 0.25,
    }
}

fn default_receive() -> ReceiveConfig {
    ReceiveConfig {
        n: 10,
        spacing_wavelengths: 0.5,
    }
}

fn default_scheme() -> Scheme {
    Scheme::Selection
}

fn default_theta_c_deg() -> f64 {
    14.4775
}

fn default_dict_size() -> usize {
    256
}

fn default_mainlobe() -> SectorConfig {
    SectorConfig {
        min_deg: -10.0,
        max_deg: 10.0,
    }
}

fn default_sidelobe_db() -> f64 {
    -20.0
}

fn default_snr_grid() -> Vec<f64> {
    (-10..=10).step_by(2).map(|x| x as f64).collect()
}

fn default_num_symbols() -> u64 {
    1_000_000
}

fn default_seed() -> u64 {
    1
}

fn default_prf_hz() -> f64 {
    10_000.0
}

fn default_sigma_grid() -> Vec<f64> {
    vec![1.0, 2.0, 3.0, 4.0, 5.0]
}

fn default_trials() -> u64 {
    500
}

impl Default for RunConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("empty config is valid")
    }
}

impl RunConfig {
    pub fn from_str(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_path<P: AsRef<Path>>(path: P) -> Result<Self> {
        Self::from_str(&std::fs::read_to_string(path)?)
    }

    pub fn array_geometry(&self) -> Result<ArrayGeometry> {
        ArrayGeometry::new(self.geometry.m, self.geometry.spacing_wavelengths)
    }

    pub fn receive_array(&self) -> Result<ReceiveArray> {
        ReceiveArray::ula(self.receive.n, self.receive.spacing_wavelengths)
    }

    pub fn subarray_size(&self) -> usize {
        self.k.unwrap_or(self.geometry.m / 2)
    }

    pub fn theta_c(&self) -> f64 {
        self.theta_c_deg.to_radians()
    }

    pub fn sidelobe_linear(&self) -> f64 {
        10f64.powf(self.sidelobe_db / 20.0)
    }

    pub fn optimization_grid(&self) -> Result<PatternGrid> {
        PatternGrid::optimization((self.mainlobe.min_deg, self.mainlobe.max_deg))
    }

    pub fn reporting_grid(&self) -> Result<PatternGrid> {
        PatternGrid::reporting((self.mainlobe.min_deg, self.mainlobe.max_deg))
    }

    pub fn monte_carlo(&self) -> MonteCarloConfig {
        MonteCarloConfig {
            snr_grid_db: self.snr_grid_db.clone(),
            num_symbols: self.num_symbols,
            seed: self.seed,
        }
    }

    pub fn effective_mode(&self) -> DictMode {
        self.dictionary.mode.unwrap_or(match self.scheme {
            Scheme::Selection => DictMode::Comm,
            Scheme::Hybrid => DictMode::Hybrid,
            Scheme::Regularized => DictMode::Regularized,
        })
    }

    /// Builds (or loads, when `dictionary.path` is set) the dictionary this
    /// configuration asks for.
    pub fn dictionary(&self, threads: Option<usize>) -> Result<SymbolDictionary> {
        if let Some(path) = &self.dictionary.path {
            let dict = SymbolDictionary::from_json(&std::fs::read_to_string(path)?)?;
            return Ok(dict);
        }
        self.build_dictionary(self.effective_mode(), threads)
    }

    pub fn build_dictionary(
        &self,
        mode: DictMode,
        threads: Option<usize>,
    ) -> Result<SymbolDictionary> {
        let m = self.geometry.m;
        let k = self.subarray_size();
        let size = self.dictionary.size;
        match mode {
            DictMode::Comm => greedy_maxmin_dictionary(m, k, size),
            DictMode::Hybrid => permute_augment(&greedy_maxmin_dictionary(m, k, size)?),
            DictMode::Radar => build_radar_dictionary_by_enumeration(
                &self.array_geometry()?,
                k,
                size,
                &self.receive_array()?,
                &self.optimization_grid()?,
                self.sidelobe_linear(),
                threads,
            ),
            DictMode::Regularized => {
                if m != 2 * k {
                    return Err(Error::InvalidParameter(format!(
                        "regularized scheme needs M = 2K, got M={m}, K={k}"
                    )));
                }
                build_regularized_dictionary(k)
            }
        }
    }

    /// Assembles the signaling configuration around a dictionary.
    pub fn scheme_config(&self, dictionary: SymbolDictionary) -> Result<SchemeConfig> {
        if dictionary.scheme() != self.scheme {
            return Err(Error::SchemeMismatch {
                expected: self.scheme.to_string(),
                got: dictionary.scheme().to_string(),
            });
        }
        SchemeConfig::new(
            self.array_geometry()?,
            self.theta_c(),
            dictionary,
            self.bits_per_symbol,
            self.prf_hz,
            RotationMode::PhasePlan,
        )
    }

    /// The maximal spread angle of the configured geometry, for reporting.
    pub fn maximal_spread_deg(&self) -> Result<f64> {
        Ok(maximal_spread_angle(&self.array_geometry()?)?.to_degrees())
    }
}
