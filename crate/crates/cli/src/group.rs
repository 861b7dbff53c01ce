use carnot_core::algebra::GroupSpec;
use carnot_core::catalog::{Builtin, GAMatrix};
use carnot_core::{Algebra, Error, Result};
use serde::Serialize;
use std::path::Path;

pub struct Group {
    pub descriptor: String,
    pub builtin: Option<Builtin>,
    pub alg: Algebra,
}

/// What the manifest records about a group: the descriptor as given and the
/// structure constants it resolved to.
#[derive(Serialize)]
pub struct GroupRecord {
    pub descriptor: String,
    pub name: String,
    pub n: usize,
    #[serde(rename = "Q")]
    pub q: usize,
    pub spec: GroupSpec,
}

fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read '{path}': {e}")))
}

impl Group {
    pub fn resolve(descriptor: &str) -> Result<Self> {
        let builtin = if let Some(path) = descriptor.strip_prefix("ga:") {
            Some(Builtin::Ga(GAMatrix::from_json(&read(path)?)?))
        } else if Path::new(descriptor).is_file() {
            None
        } else {
            Some(Builtin::parse(descriptor)?)
        };
        let alg = match &builtin {
            Some(b) => b.algebra()?,
            None => GroupSpec::from_json(&read(descriptor)?)?.to_algebra()?,
        };
        Ok(Self {
            descriptor: descriptor.to_string(),
            builtin,
            alg,
        })
    }

    pub fn ga_matrix(&self) -> Option<&GAMatrix<f64>> {
        match &self.builtin {
            Some(Builtin::Ga(a)) => Some(a),
            _ => None,
        }
    }

    pub fn record(&self) -> GroupRecord {
        GroupRecord {
            descriptor: self.descriptor.clone(),
            name: self.alg.name().to_string(),
            n: self.alg.dim(),
            q: self.alg.homogeneous_dim(),
            spec: GroupSpec::from_algebra(&self.alg),
        }
    }
}
