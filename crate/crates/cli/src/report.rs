//! Deterministic command reports: fixed field order, exact values as
//! `num/den` strings, root tokens as `{"poly": .., "side": .., "iso": ..}`.

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Violation,
}

/// The unit every command emits on stdout.
#[derive(Debug, Serialize)]
pub struct CommandReport {
    pub command: String,
    pub input: String,
    pub status: Status,
    pub exit_status: i32,
    pub result: serde_json::Value,
}

impl CommandReport {
    pub fn ok(command: &str, input_digest: String, result: serde_json::Value) -> CommandReport {
        CommandReport {
            command: command.to_string(),
            input: input_digest,
            status: Status::Ok,
            exit_status: 0,
            result,
        }
    }

    pub fn violation(
        command: &str,
        input_digest: String,
        result: serde_json::Value,
    ) -> CommandReport {
        CommandReport {
            command: command.to_string(),
            input: input_digest,
            status: Status::Violation,
            exit_status: 1,
            result,
        }
    }

    pub fn render(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }
}

pub fn digest(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    format!("sha256:{:x}", hasher.finalize())
}
