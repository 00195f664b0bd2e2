use std::collections::BTreeMap;
use std::sync::{mpsc, Arc, Mutex, MutexGuard};

use tracing::{debug, warn};

use super::{ClientId, ErrorCode, Hello, Session, WireError, WireMessage};
use crate::fusion::{FusionController, InputEvent};
use crate::gesture::GestureConfig;

/// Where a connected client's outgoing messages go.
pub trait Outbox: Send {
    /// Returns false once the peer is gone.
    fn send(&self, msg: &WireMessage) -> bool;
}

impl Outbox for mpsc::Sender<WireMessage> {
    fn send(&self, msg: &WireMessage) -> bool {
        mpsc::Sender::send(self, msg.clone()).is_ok()
    }
}

struct Room<O> {
    session: Session,
    outboxes: BTreeMap<ClientId, O>,
}

/// Identifies one connection inside the hub.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClientHandle {
    pub session_id: String,
    pub client_id: ClientId,
}

/// All live sessions. Each session sits behind its own lock, so events in
/// one session are totally ordered while sessions proceed independently.
pub struct Hub<O> {
    controller: Arc<FusionController>,
    gesture: GestureConfig,
    rooms: Mutex<BTreeMap<String, Arc<Mutex<Room<O>>>>>,
}

fn lock<T>(m: &Mutex<T>) -> MutexGuard<'_, T> {
    m.lock().unwrap_or_else(|p| p.into_inner())
}

impl<O: Outbox> Hub<O> {
    pub fn new(controller: Arc<FusionController>, gesture: GestureConfig) -> Self {
        Hub {
            controller,
            gesture,
            rooms: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn controller(&self) -> &Arc<FusionController> {
        &self.controller
    }

    fn room(&self, id: &str) -> Option<Arc<Mutex<Room<O>>>> {
        lock(&self.rooms).get(id).cloned()
    }

    /// Registers a client and sends it a Welcome. On a bad hello the error
    /// goes to `outbox` and nothing is registered.
    pub fn connect(&self, hello: &Hello, outbox: O) -> Result<ClientHandle, WireError> {
        if hello.session_id.trim().is_empty() {
            let e = WireError::new(ErrorCode::BadHello, "empty session_id");
            outbox.send(&e.clone().into());
            return Err(e);
        }
        let room = {
            let mut rooms = lock(&self.rooms);
            rooms
                .entry(hello.session_id.clone())
                .or_insert_with(|| {
                    Arc::new(Mutex::new(Room {
                        session: Session::new(
                            hello.session_id.clone(),
                            self.controller.clone(),
                            self.gesture,
                        ),
                        outboxes: BTreeMap::new(),
                    }))
                })
                .clone()
        };
        let mut room = lock(&room);
        match room.session.handle_connect(hello) {
            Ok(welcome) => {
                let client_id = welcome.client_id;
                outbox.send(&WireMessage::Welcome(welcome));
                room.outboxes.insert(client_id, outbox);
                Ok(ClientHandle {
                    session_id: hello.session_id.clone(),
                    client_id,
                })
            }
            Err(e) => {
                outbox.send(&e.clone().into());
                Err(e)
            }
        }
    }

    /// Applies one event. A resulting Delta goes to every client in the
    /// session, sent while the session lock is held so all clients see the
    /// same order. Errors go to the sender only.
    pub fn event(
        &self,
        handle: &ClientHandle,
        event: &InputEvent,
    ) -> Result<Option<u64>, WireError> {
        let Some(room) = self.room(&handle.session_id) else {
            return Err(WireError::new(ErrorCode::UnknownClient, "no such session"));
        };
        let mut room = lock(&room);
        match room.session.handle_event(handle.client_id, event) {
            Ok(None) => Ok(None),
            Ok(Some(delta)) => {
                let seq = delta.seq;
                let msg = WireMessage::Delta(delta);
                let mut gone = Vec::new();
                for (id, out) in &room.outboxes {
                    if !out.send(&msg) {
                        gone.push(*id);
                    }
                }
                for id in gone {
                    warn!(client_id = id, "dropping client with closed outbox");
                    room.outboxes.remove(&id);
                    room.session.remove_client(id);
                }
                Ok(Some(seq))
            }
            Err(e) => {
                if let Some(out) = room.outboxes.get(&handle.client_id) {
                    out.send(&e.clone().into());
                }
                Err(e)
            }
        }
    }

    /// Sends the client a fresh Welcome for its current session state.
    pub fn resnapshot(&self, handle: &ClientHandle) -> Result<(), WireError> {
        let room = self
            .room(&handle.session_id)
            .ok_or_else(|| WireError::new(ErrorCode::UnknownClient, "no such session"))?;
        let room = lock(&room);
        let welcome = room.session.resnapshot(handle.client_id)?;
        if let Some(out) = room.outboxes.get(&handle.client_id) {
            out.send(&WireMessage::Welcome(welcome));
        }
        Ok(())
    }

    /// Removes a client; an empty session is dropped.
    pub fn disconnect(&self, handle: &ClientHandle) {
        let mut rooms = lock(&self.rooms);
        let Some(room) = rooms.get(&handle.session_id).cloned() else {
            return;
        };
        let mut r = lock(&room);
        r.outboxes.remove(&handle.client_id);
        r.session.remove_client(handle.client_id);
        if r.session.client_count() == 0 {
            debug!(session = %handle.session_id, "closing empty session");
            drop(r);
            rooms.remove(&handle.session_id);
        }
    }

    pub fn session_count(&self) -> usize {
        lock(&self.rooms).len()
    }

    /// Runs `f` against a session under its lock.
    pub fn with_session<R>(&self, id: &str, f: impl FnOnce(&Session) -> R) -> Option<R> {
        let room = self.room(id)?;
        let room = lock(&room);
        Some(f(&room.session))
    }
}
