use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::network::{Activation, Dense, Mlp, Parameters};
use crate::action_space::catalog_hash;
use crate::error::{Error, Result};

pub const WEIGHT_FORMAT_VERSION: u32 = 1;

/// One named network inside a weight file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkBlob {
    pub name: String,
    pub layer_dims: Vec<usize>,
    pub activations: Vec<Activation>,
    /// Flat parameters in [`Parameters`] order.
    pub parameters: Vec<f64>,
}

impl NetworkBlob {
    pub fn from_mlp(name: &str, net: &Mlp) -> Self {
        Self {
            name: name.to_string(),
            layer_dims: net.layer_dims(),
            activations: net.activations(),
            parameters: net.flat_params(),
        }
    }

    pub fn to_mlp(&self) -> Result<Mlp> {
        let dims = &self.layer_dims;
        if dims.len() < 2 || self.activations.len() != dims.len() - 1 {
            return Err(Error::Weights(format!(
                "network {}: {} activations for dims {dims:?}",
                self.name,
                self.activations.len()
            )));
        }
        let layers = dims
            .windows(2)
            .zip(&self.activations)
            .map(|(w, &act)| Dense::zeros(w[0], w[1], act))
            .collect();
        let mut net = Mlp::from_layers(layers)?;
        if net.param_count() != self.parameters.len() {
            return Err(Error::Weights(format!(
                "network {}: {} parameters, dims {dims:?} need {}",
                self.name,
                self.parameters.len(),
                net.param_count()
            )));
        }
        net.set_flat_params(&self.parameters)?;
        if !net.all_finite() {
            return Err(Error::Weights(format!("network {} holds non-finite parameters", self.name)));
        }
        Ok(net)
    }
}

/// Versioned on-disk snapshot of an agent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightFile {
    pub format_version: u32,
    pub agent_kind: String,
    pub action_catalog_hash: String,
    pub networks: Vec<NetworkBlob>,
    /// Agent configuration the networks were trained with.
    #[serde(default)]
    pub config: serde_json::Value,
}

impl WeightFile {
    pub fn new(agent_kind: &str, networks: &[(&str, &Mlp)], config: serde_json::Value) -> Self {
        Self {
            format_version: WEIGHT_FORMAT_VERSION,
            agent_kind: agent_kind.to_string(),
            action_catalog_hash: catalog_hash(),
            networks: networks.iter().map(|(n, m)| NetworkBlob::from_mlp(n, m)).collect(),
            config,
        }
    }

    pub fn network(&self, name: &str) -> Result<Mlp> {
        self.networks
            .iter()
            .find(|b| b.name == name)
            .ok_or_else(|| Error::Weights(format!("no network named {name}")))?
            .to_mlp()
    }

    fn validate(&self) -> Result<()> {
        if self.format_version != WEIGHT_FORMAT_VERSION {
            return Err(Error::Weights(format!(
                "format version {} unsupported (expected {WEIGHT_FORMAT_VERSION})",
                self.format_version
            )));
        }
        if self.action_catalog_hash != catalog_hash() {
            return Err(Error::Weights(format!(
                "action catalog hash {} does not match this build",
                self.action_catalog_hash
            )));
        }
        for blob in &self.networks {
            blob.to_mlp()?;
        }
        Ok(())
    }
}

pub fn save_weights(file: &WeightFile, path: &Path) -> Result<()> {
    fs::write(path, serde_json::to_vec(file)?)?;
    Ok(())
}

/// Reads and fully validates a weight file; nothing is returned unless every
/// network rebuilds.
pub fn load_weights(path: &Path) -> Result<WeightFile> {
    let bytes = fs::read(path)?;
    let file: WeightFile =
        serde_json::from_slice(&bytes).map_err(|e| Error::Weights(format!("{}: {e}", path.display())))?;
    file.validate()?;
    Ok(file)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sample() -> Mlp {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        Mlp::new(&[28, 16, 200], Activation::Relu, Activation::Linear, 1.0, &mut rng).unwrap()
    }

    #[test]
    fn round_trip_is_bit_identical() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("net.json");
        let net = sample();
        save_weights(&WeightFile::new("dql", &[("online", &net)], serde_json::json!({})), &path).unwrap();
        let loaded = load_weights(&path).unwrap();
        assert_eq!(loaded.agent_kind, "dql");
        let back = loaded.network("online").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let x: Vec<f64> = (0..28).map(|_| rng.gen()).collect();
            let a = net.forward(&x).unwrap();
            let b = back.forward(&x).unwrap();
            assert!(a.iter().zip(&b).all(|(p, q)| p.to_bits() == q.to_bits()));
        }
    }

    #[test]
    fn truncated_file_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("net.json");
        save_weights(&WeightFile::new("dql", &[("online", &sample())], serde_json::Value::Null), &path).unwrap();
        let bytes = fs::read(&path).unwrap();
        fs::write(&path, &bytes[..bytes.len() / 2]).unwrap();
        assert!(matches!(load_weights(&path), Err(Error::Weights(_))));
    }

    #[test]
    fn metadata_checked() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("net.json");
        let mut file = WeightFile::new("ppo", &[("actor", &sample())], serde_json::Value::Null);
        file.action_catalog_hash = "deadbeef".into();
        save_weights(&file, &path).unwrap();
        assert!(matches!(load_weights(&path), Err(Error::Weights(m)) if m.contains("catalog")));

        let mut file = WeightFile::new("ppo", &[("actor", &sample())], serde_json::Value::Null);
        file.format_version = 99;
        save_weights(&file, &path).unwrap();
        assert!(load_weights(&path).is_err());

        let mut file = WeightFile::new("ppo", &[("actor", &sample())], serde_json::Value::Null);
        file.networks[0].parameters.pop();
        save_weights(&file, &path).unwrap();
        assert!(load_weights(&path).is_err());
    }
}
