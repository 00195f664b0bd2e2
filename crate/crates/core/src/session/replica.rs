use thiserror::Error;

use super::{Delta, Welcome};
use crate::scene::{Scene, SceneError, SceneHash, SceneParseError};

#[derive(Debug, Error)]
pub enum ReplicaError {
    #[error("bad snapshot: {0}")]
    Snapshot(#[from] SceneParseError),
    #[error("sequence gap: expected {expected}, got {got}")]
    Gap { expected: u64, got: u64 },
    #[error("replica diverged at seq {seq}: local {local}, server {server}")]
    Diverged {
        seq: u64,
        local: SceneHash,
        server: SceneHash,
    },
    #[error("delta {seq} does not apply: {source}")]
    Apply { seq: u64, source: SceneError },
}

/// A client's local copy of a session scene, kept in step by deltas.
///
/// On any error the replica is left as it was; the caller should ask for a
/// fresh snapshot.
#[derive(Debug, Clone)]
pub struct ClientReplica {
    scene: Scene,
    seq: u64,
}

impl ClientReplica {
    pub fn from_welcome(w: &Welcome) -> Result<Self, ReplicaError> {
        Ok(ClientReplica {
            scene: Scene::from_canonical_json(&w.snapshot)?,
            seq: w.seq,
        })
    }

    pub fn scene(&self) -> &Scene {
        &self.scene
    }

    pub fn seq(&self) -> u64 {
        self.seq
    }

    pub fn apply_delta(&mut self, d: &Delta) -> Result<(), ReplicaError> {
        if d.seq != self.seq + 1 {
            return Err(ReplicaError::Gap {
                expected: self.seq + 1,
                got: d.seq,
            });
        }
        let mut next = self.scene.clone();
        next.apply_all(&d.directives)
            .map_err(|source| ReplicaError::Apply { seq: d.seq, source })?;
        let local = next.scene_hash();
        if local != d.scene_hash {
            return Err(ReplicaError::Diverged {
                seq: d.seq,
                local,
                server: d.scene_hash.clone(),
            });
        }
        self.scene = next;
        self.seq = d.seq;
        Ok(())
    }
}
