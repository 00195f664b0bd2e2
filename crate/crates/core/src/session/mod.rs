//! Shared scenes for several collaborators.
//!
//! Each client has its own fusion state and gesture pipeline; all of them
//! edit one scene. Events are applied in server arrival order, and every
//! event that produces directives becomes exactly one [`Delta`] with the
//! next sequence number and the post-application scene hash.

mod hub;
mod replica;
mod wire;

use std::collections::BTreeMap;
use std::sync::Arc;

use tracing::debug;

use crate::fusion::{FusionController, FusionState, InputEvent, Payload};
use crate::gesture::{GestureConfig, GestureEngine, LandmarkFrame};
use crate::scene::Scene;

pub use hub::{ClientHandle, Hub, Outbox};
pub use replica::{ClientReplica, ReplicaError};
pub use wire::{ClientId, Delta, ErrorCode, Hello, Welcome, WireError, WireMessage};

#[derive(Debug, Clone)]
struct Client {
    name: String,
    fusion: FusionState,
    gestures: GestureEngine,
}

#[derive(Debug, Clone)]
pub struct Session {
    id: String,
    scene: Scene,
    clients: BTreeMap<ClientId, Client>,
    seq: u64,
    next_client: ClientId,
    controller: Arc<FusionController>,
    gesture: GestureConfig,
}

impl Session {
    pub fn new(
        id: impl Into<String>,
        controller: Arc<FusionController>,
        gesture: GestureConfig,
    ) -> Self {
        Session {
            id: id.into(),
            scene: Scene::new(),
            clients: BTreeMap::new(),
            seq: 0,
            next_client: 1,
            controller,
            gesture,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn scene(&self) -> &Scene {
        &self.scene
    }

    pub fn seq(&self) -> u64 {
        self.seq
    }

    pub fn client_count(&self) -> usize {
        self.clients.len()
    }

    pub fn client_state(&self, id: ClientId) -> Option<&FusionState> {
        self.clients.get(&id).map(|c| &c.fusion)
    }

    pub fn client_name(&self, id: ClientId) -> Option<&str> {
        self.clients.get(&id).map(|c| c.name.as_str())
    }

    /// Registers a client and returns its welcome.
    pub fn handle_connect(&mut self, hello: &Hello) -> Result<Welcome, WireError> {
        validate_hello(hello)?;
        if hello.session_id != self.id {
            return Err(WireError::new(
                ErrorCode::BadHello,
                format!(
                    "hello for session {:?} sent to {:?}",
                    hello.session_id, self.id
                ),
            ));
        }
        let gestures = GestureEngine::new(self.gesture, self.controller.config().viewport)
            .map_err(|e| WireError::new(ErrorCode::BadHello, e.to_string()))?;
        let client_id = self.next_client;
        self.next_client += 1;
        self.clients.insert(
            client_id,
            Client {
                name: hello.client_name.clone(),
                fusion: FusionState::default(),
                gestures,
            },
        );
        debug!(session = %self.id, client_id, name = %hello.client_name, "client joined");
        Ok(self.welcome(client_id))
    }

    /// Fresh snapshot for an already registered client.
    pub fn resnapshot(&self, client_id: ClientId) -> Result<Welcome, WireError> {
        if !self.clients.contains_key(&client_id) {
            return Err(unknown_client(client_id));
        }
        Ok(self.welcome(client_id))
    }

    fn welcome(&self, client_id: ClientId) -> Welcome {
        Welcome {
            client_id,
            snapshot: self.scene.to_canonical_json(),
            hud: self.controller.lexicon().entries().to_vec(),
            seq: self.seq,
        }
    }

    pub fn remove_client(&mut self, client_id: ClientId) -> bool {
        self.clients.remove(&client_id).is_some()
    }

    /// Runs one client event through that client's pipeline and applies the
    /// resulting directives. All-or-nothing: on error neither the scene nor
    /// the client's state changes.
    pub fn handle_event(
        &mut self,
        client_id: ClientId,
        event: &InputEvent,
    ) -> Result<Option<Delta>, WireError> {
        let client = self
            .clients
            .get(&client_id)
            .ok_or_else(|| unknown_client(client_id))?;
        let mut fusion = client.fusion.clone();
        let mut gestures = client.gestures.clone();

        let inputs: Vec<InputEvent> = match &event.payload {
            Payload::Landmarks { hand, points } => {
                let frame = LandmarkFrame::new(event.t, *hand, **points)
                    .map_err(|e| WireError::new(ErrorCode::BadEvent, e.to_string()))?;
                gestures
                    .process(&frame)
                    .map_err(|e| WireError::new(ErrorCode::BadEvent, e.to_string()))?
                    .into_iter()
                    .map(InputEvent::from)
                    .collect()
            }
            _ => vec![event.clone()],
        };

        let mut scene = self.scene.clone();
        let mut directives = Vec::new();
        for input in &inputs {
            let step = self.controller.step(&fusion, input, &scene);
            scene
                .apply_all(&step.directives)
                .map_err(|e| WireError::new(ErrorCode::ApplyFailed, e.to_string()))?;
            fusion = step.state;
            directives.extend(step.directives);
        }

        let client = self.clients.get_mut(&client_id).expect("checked above");
        client.fusion = fusion;
        client.gestures = gestures;
        if directives.is_empty() {
            return Ok(None);
        }
        self.scene = scene;
        self.seq += 1;
        Ok(Some(Delta {
            seq: self.seq,
            directives,
            scene_hash: self.scene.scene_hash(),
        }))
    }
}

fn unknown_client(id: ClientId) -> WireError {
    WireError::new(
        ErrorCode::UnknownClient,
        format!("client {id} is not registered"),
    )
}

fn validate_hello(hello: &Hello) -> Result<(), WireError> {
    let id = &hello.session_id;
    if id.trim().is_empty() {
        return Err(WireError::new(ErrorCode::BadHello, "empty session_id"));
    }
    if id.len() > 128 || id.chars().any(char::is_control) {
        return Err(WireError::new(
            ErrorCode::BadHello,
            "session_id too long or has control characters",
        ));
    }
    Ok(())
}
