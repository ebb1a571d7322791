//! JSON file formats for classical instances, quantum instances, reduction
//! bundles and certificates.
//!
//! A quantum instance file looks like
//!
//! ```json
//! {"problem": "ses", "state": {...} | "state.json",
//!  "weight": {"type": "magnetization", "axis": "z"},
//!  "B": "0.5", "epsilon": "0.01"}
//! ```
//!
//! A string `state` is a path relative to the instance file. A reduction
//! bundle is `{"instance": <instance>, "map": <map>}`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exact::Decimal;
use crate::mps::{MpsState, StateFile};
use crate::problems::{SesInstance, SesspInstance, SplitCertificate, SubsetCertificate};
use crate::reductions::{PartitionInstance, RealSubsetSumInstance, ReductionMap, SubsetSumInstance};
use crate::weights::WeightFunction;

pub const MAX_FILE_BYTES: u64 = 64 << 20;

/// Reads a file, refusing anything over [`MAX_FILE_BYTES`].
pub fn read_limited(path: &Path) -> Result<String> {
    let bytes = fs::metadata(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?.len();
    if bytes > MAX_FILE_BYTES {
        return Err(Error::FileTooLarge { bytes, limit: MAX_FILE_BYTES });
    }
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassicalKind {
    SubsetSum,
    Partition,
    RealSubsetSum,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassicalFile {
    pub problem: ClassicalKind,
    pub sizes: Vec<Decimal>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Decimal>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<Decimal>,
}

fn to_u64(d: &Decimal, what: &str) -> Result<u64> {
    if !d.is_integer() || d.is_negative() {
        return Err(Error::InvalidInstance(format!("{what} {d} is not a nonnegative integer")));
    }
    u64::try_from(d.numer()).map_err(|_| Error::InvalidInstance(format!("{what} {d} does not fit in 64 bits")))
}

fn require<'a>(v: &'a Option<Decimal>, what: &str) -> Result<&'a Decimal> {
    v.as_ref().ok_or_else(|| Error::InvalidInstance(format!("missing {what}")))
}

impl ClassicalFile {
    pub fn from_subset_sum(inst: &SubsetSumInstance) -> Self {
        ClassicalFile {
            problem: ClassicalKind::SubsetSum,
            sizes: inst.sizes().iter().map(|&s| Decimal::from(s)).collect(),
            target: Some(Decimal::from(inst.target())),
            epsilon: None,
        }
    }

    pub fn from_partition(inst: &PartitionInstance) -> Self {
        ClassicalFile {
            problem: ClassicalKind::Partition,
            sizes: inst.sizes().iter().map(|&s| Decimal::from(s)).collect(),
            target: None,
            epsilon: None,
        }
    }

    pub fn from_real(inst: &RealSubsetSumInstance) -> Self {
        ClassicalFile {
            problem: ClassicalKind::RealSubsetSum,
            sizes: inst.sizes().to_vec(),
            target: Some(inst.target().clone()),
            epsilon: Some(inst.epsilon().clone()),
        }
    }

    pub fn to_subset_sum(&self) -> Result<SubsetSumInstance> {
        let sizes = self.sizes.iter().map(|s| to_u64(s, "size")).collect::<Result<_>>()?;
        SubsetSumInstance::new(sizes, to_u64(require(&self.target, "B")?, "B")?)
    }

    pub fn to_partition(&self) -> Result<PartitionInstance> {
        PartitionInstance::new(self.sizes.iter().map(|s| to_u64(s, "size")).collect::<Result<_>>()?)
    }

    pub fn to_real(&self) -> Result<RealSubsetSumInstance> {
        RealSubsetSumInstance::new(
            self.sizes.clone(),
            require(&self.target, "B")?.clone(),
            require(&self.epsilon, "epsilon")?.clone(),
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum QuantumInstance {
    Ses(SesInstance),
    Sessp(SesspInstance),
}

impl QuantumInstance {
    pub fn state(&self) -> &MpsState {
        match self {
            QuantumInstance::Ses(i) => i.state(),
            QuantumInstance::Sessp(i) => i.state(),
        }
    }

    pub fn weight(&self) -> WeightFunction {
        match self {
            QuantumInstance::Ses(i) => i.weight(),
            QuantumInstance::Sessp(i) => i.weight(),
        }
    }

    pub fn to_file(&self) -> InstanceFile {
        match self {
            QuantumInstance::Ses(i) => InstanceFile {
                problem: QuantumKind::Ses,
                state: serde_json::to_value(i.state()).expect("state serializes"),
                weight: i.weight(),
                target: Some(i.target().clone()),
                epsilon: i.epsilon().clone(),
                precision_digits: Some(i.precision_digits()),
                site_weights: i.site_weights().map(<[Decimal]>::to_vec),
            },
            QuantumInstance::Sessp(i) => InstanceFile {
                problem: QuantumKind::Sessp,
                state: serde_json::to_value(i.state()).expect("state serializes"),
                weight: i.weight(),
                target: None,
                epsilon: i.epsilon().clone(),
                precision_digits: Some(i.precision_digits()),
                site_weights: i.site_weights().map(<[Decimal]>::to_vec),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuantumKind {
    Ses,
    Sessp,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub problem: QuantumKind,
    pub state: Value,
    pub weight: WeightFunction,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Decimal>,
    pub epsilon: Decimal,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision_digits: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub site_weights: Option<Vec<Decimal>>,
}

impl InstanceFile {
    /// Builds the instance; `base` resolves a state given by path.
    pub fn resolve(&self, base: Option<&Path>) -> Result<QuantumInstance> {
        let state = match &self.state {
            Value::String(rel) => {
                let path = match base {
                    Some(dir) => dir.join(rel),
                    None => rel.into(),
                };
                load_state(&path)?
            }
            other => state_from_value(other.clone())?,
        };
        let inst = match self.problem {
            QuantumKind::Ses => {
                let target = require(&self.target, "B")?.clone();
                let mut inst = SesInstance::new(state, self.weight, target, self.epsilon.clone())?;
                if let Some(sw) = &self.site_weights {
                    inst = inst.with_site_weights(sw.clone())?;
                }
                QuantumInstance::Ses(inst)
            }
            QuantumKind::Sessp => {
                if self.target.is_some() {
                    return Err(Error::InvalidInstance("SESSP instances take no B".into()));
                }
                let mut inst = SesspInstance::new(state, self.weight, self.epsilon.clone())?;
                if let Some(sw) = &self.site_weights {
                    inst = inst.with_site_weights(sw.clone())?;
                }
                QuantumInstance::Sessp(inst)
            }
        };
        Ok(inst)
    }
}

fn state_from_value(v: Value) -> Result<MpsState> {
    let file: StateFile = serde_json::from_value(v)?;
    MpsState::try_from(file)
}

pub fn load_state(path: &Path) -> Result<MpsState> {
    state_from_value(serde_json::from_str(&read_limited(path)?)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bundle {
    pub instance: InstanceFile,
    pub map: ReductionMap,
}

/// Parses an instance or bundle document.
pub fn parse_instance(text: &str, base: Option<&Path>) -> Result<(QuantumInstance, Option<ReductionMap>)> {
    let value: Value = serde_json::from_str(text)?;
    if value.get("instance").is_some() {
        let bundle: Bundle = serde_json::from_value(value)?;
        let inst = bundle.instance.resolve(base)?;
        check_map(&inst, &bundle.map)?;
        Ok((inst, Some(bundle.map)))
    } else {
        let file: InstanceFile = serde_json::from_value(value)?;
        Ok((file.resolve(base)?, None))
    }
}

fn check_map(inst: &QuantumInstance, map: &ReductionMap) -> Result<()> {
    if map.qubits != inst.state().n() {
        return Err(Error::InvalidInstance(format!(
            "map covers {} qubits, state has {}",
            map.qubits,
            inst.state().n()
        )));
    }
    if let Some(pairs) = &map.pairs {
        if pairs.len() != map.items || pairs.iter().flatten().any(|&q| q >= map.qubits) {
            return Err(Error::InvalidInstance("map pairs are inconsistent".into()));
        }
    } else if map.items != map.qubits {
        return Err(Error::InvalidInstance("identity map needs one item per qubit".into()));
    }
    if map.source_sizes.as_ref().is_some_and(|s| s.len() != map.items) {
        return Err(Error::InvalidInstance("map sizes do not match its items".into()));
    }
    Ok(())
}

/// Loads an instance or bundle file.
pub fn load_instance(path: &Path) -> Result<(QuantumInstance, Option<ReductionMap>)> {
    parse_instance(&read_limited(path)?, path.parent())
}

pub fn load_classical(path: &Path) -> Result<ClassicalFile> {
    Ok(serde_json::from_str(&read_limited(path)?)?)
}

/// Parses a subset certificate, either bare or nested under `certificate`
/// as written by the solver.
pub fn parse_subset_certificate(text: &str) -> Result<SubsetCertificate> {
    Ok(serde_json::from_value(certificate_value(text)?)?)
}

pub fn parse_split_certificate(text: &str) -> Result<SplitCertificate> {
    Ok(serde_json::from_value(certificate_value(text)?)?)
}

fn certificate_value(text: &str) -> Result<Value> {
    let mut value: Value = serde_json::from_str(text)?;
    if let Some(inner) = value.get_mut("certificate") {
        if inner.is_null() {
            return Err(Error::InvalidCertificate("the file holds no certificate".into()));
        }
        return Ok(inner.take());
    }
    Ok(value)
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value serializes");
    s.push('\n');
    s
}
