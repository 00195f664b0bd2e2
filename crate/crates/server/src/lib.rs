//! Websocket front end for shared sessions.
//!
//! Every text frame is one [`WireMessage`] as JSON. A connection starts
//! with `Hello`; the server answers `Welcome` and then relays `Delta`s for
//! the whole session. Sending `Hello` again on an open connection asks for
//! a fresh snapshot.

use std::io;
use std::net::SocketAddr;
use std::sync::Arc;

use futures_util::{SinkExt, StreamExt};
use modalcad_core::fusion::FusionController;
use modalcad_core::gesture::GestureConfig;
use modalcad_core::session::{ClientHandle, ErrorCode, Hub, Outbox, WireError, WireMessage};
use tokio::net::{TcpListener, TcpStream};
use tokio::sync::mpsc;
use tokio::task::JoinHandle;
use tokio_tungstenite::tungstenite::Message;
use tracing::{debug, info, warn};

/// Outgoing side of one socket. Messages are serialized on the caller's
/// side so broadcast order is fixed while the session lock is held.
#[derive(Debug, Clone)]
pub struct SocketOutbox(mpsc::UnboundedSender<String>);

impl Outbox for SocketOutbox {
    fn send(&self, msg: &WireMessage) -> bool {
        self.0.send(msg.to_json()).is_ok()
    }
}

pub type SharedHub = Arc<Hub<SocketOutbox>>;

pub fn new_hub(controller: FusionController, gesture: GestureConfig) -> SharedHub {
    Arc::new(Hub::new(Arc::new(controller), gesture))
}

/// Binds `addr` and serves in a background task.
pub async fn start(addr: &str, hub: SharedHub) -> io::Result<(SocketAddr, JoinHandle<()>)> {
    let listener = TcpListener::bind(addr).await?;
    let local = listener.local_addr()?;
    info!(%local, "listening");
    Ok((local, tokio::spawn(run(listener, hub))))
}

/// Accepts connections until the listener fails.
pub async fn run(listener: TcpListener, hub: SharedHub) {
    loop {
        match listener.accept().await {
            Ok((stream, peer)) => {
                let hub = hub.clone();
                tokio::spawn(async move {
                    if let Err(e) = connection(stream, hub).await {
                        debug!(%peer, error = %e, "connection ended with an error");
                    }
                });
            }
            Err(e) => {
                warn!(error = %e, "accept failed");
                return;
            }
        }
    }
}

async fn connection(
    stream: TcpStream,
    hub: SharedHub,
) -> Result<(), tokio_tungstenite::tungstenite::Error> {
    let ws = tokio_tungstenite::accept_async(stream).await?;
    let (mut sink, mut source) = ws.split();
    let (tx, mut rx) = mpsc::unbounded_channel::<String>();

    let writer = tokio::spawn(async move {
        while let Some(text) = rx.recv().await {
            if sink.send(Message::text(text)).await.is_err() {
                return;
            }
        }
        let _ = sink.close().await;
    });

    let outbox = SocketOutbox(tx);
    let mut client: Option<ClientHandle> = None;
    while let Some(frame) = source.next().await {
        let text = match frame? {
            Message::Text(t) => t,
            Message::Close(_) => break,
            Message::Binary(_) => {
                outbox.send(
                    &WireError::new(ErrorCode::BadMessage, "binary frames are not supported")
                        .into(),
                );
                continue;
            }
            _ => continue,
        };
        let msg = WireMessage::from_json(text.as_str());
        match (&client, msg) {
            (None, Ok(WireMessage::Hello(hello))) => match hub.connect(&hello, outbox.clone()) {
                Ok(h) => {
                    debug!(session = %h.session_id, client_id = h.client_id, "joined");
                    client = Some(h);
                }
                Err(_) => break,
            },
            (None, other) => {
                let detail = match other {
                    Ok(_) => "first message must be Hello".to_string(),
                    Err(e) => e.detail,
                };
                outbox.send(&WireError::new(ErrorCode::BadHello, detail).into());
                break;
            }
            (Some(h), Ok(WireMessage::Event { event })) => {
                // the hub reports failures to this client itself
                let _ = hub.event(h, &event);
            }
            (Some(h), Ok(WireMessage::Hello(hello))) => {
                if hello.session_id == h.session_id {
                    let _ = hub.resnapshot(h);
                } else {
                    outbox.send(
                        &WireError::new(ErrorCode::BadHello, "a connection cannot switch sessions")
                            .into(),
                    );
                }
            }
            (Some(_), Ok(other)) => {
                let detail = format!("clients may not send {}", type_name(&other));
                outbox.send(&WireError::new(ErrorCode::BadMessage, detail).into());
            }
            (Some(_), Err(e)) => {
                outbox.send(&e.into());
            }
        }
    }

    if let Some(h) = &client {
        hub.disconnect(h);
        debug!(session = %h.session_id, client_id = h.client_id, "left");
    }
    drop(outbox);
    let _ = writer.await;
    Ok(())
}

fn type_name(msg: &WireMessage) -> &'static str {
    match msg {
        WireMessage::Hello(_) => "Hello",
        WireMessage::Welcome(_) => "Welcome",
        WireMessage::Event { .. } => "Event",
        WireMessage::Delta(_) => "Delta",
        WireMessage::Error(_) => "Error",
    }
}
