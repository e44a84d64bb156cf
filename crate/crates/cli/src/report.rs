//! Machine-readable reports: `{command, inputs_digest, result}` with keys in
//! deterministic (alphabetical) order, so identical inputs produce
//! byte-identical output.

use sha2::{Digest, Sha256};

pub struct Report {
    command: String,
    inputs_digest: String,
    result: serde_json::Map<String, serde_json::Value>,
}

impl Report {
    /// `inputs` should cover everything that determines the result: file
    /// contents, rule strings, targets.
    pub fn new(command: &str, inputs: &[&str]) -> Self {
        let mut hasher = Sha256::new();
        for input in inputs {
            hasher.update((input.len() as u64).to_le_bytes());
            hasher.update(input.as_bytes());
        }
        let digest = hasher.finalize();
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        Report {
            command: command.to_string(),
            inputs_digest: format!("sha256:{hex}"),
            result: serde_json::Map::new(),
        }
    }

    pub fn insert(&mut self, key: &str, value: serde_json::Value) {
        self.result.insert(key.to_string(), value);
    }

    pub fn render(&self) -> String {
        let doc = serde_json::json!({
            "command": self.command,
            "inputs_digest": self.inputs_digest,
            "result": serde_json::Value::Object(self.result.clone()),
        });
        serde_json::to_string_pretty(&doc).expect("report serializes")
    }
}
