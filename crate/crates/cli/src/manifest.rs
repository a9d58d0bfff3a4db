use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use pcpa_core::collection::format_subspace;
use pcpa_core::SubspaceCollection;

/// Provenance attached to every output: enough to rerun the command.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub argv: Vec<String>,
    pub params: serde_json::Value,
    pub seed: Option<u64>,
    pub code: Option<CodeParams>,
    /// SHA-256 of the collection's canonical text form.
    pub collection_sha256: Option<String>,
    /// Member bases, omitted for the full enumeration.
    pub collection: Option<Vec<String>>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CodeParams {
    pub r: usize,
    pub m: usize,
}

impl ExperimentManifest {
    pub fn new(command: &str, params: &impl Serialize) -> Self {
        Self {
            tool: "pcpa".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            argv: std::env::args().collect(),
            params: serde_json::to_value(params).unwrap_or(serde_json::Value::Null),
            seed: None,
            code: None,
            collection_sha256: None,
            collection: None,
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn code(mut self, r: usize, m: usize) -> Self {
        self.code = Some(CodeParams { r, m });
        self
    }

    pub fn collection(mut self, collection: &SubspaceCollection, list_members: bool) -> Self {
        self.collection_sha256 = Some(collection_hash(collection));
        if list_members {
            self.collection = Some(collection.members().iter().map(format_subspace).collect());
        }
        self
    }

    /// Single `#` line for text outputs.
    pub fn comment_line(&self) -> String {
        format!(
            "# manifest: {}\n",
            serde_json::to_string(self).unwrap_or_default()
        )
    }
}

pub fn collection_hash(collection: &SubspaceCollection) -> String {
    hex::encode(Sha256::digest(collection.to_text().as_bytes()))
}

/// Recovers the manifest from a text output's comment line.
#[cfg(test)]
fn parse_comment_line(text: &str) -> Option<ExperimentManifest> {
    text.lines()
        .find_map(|l| l.strip_prefix("# manifest: "))
        .and_then(|json| serde_json::from_str(json).ok())
}
