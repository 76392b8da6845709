//! Client side of the JSON-lines oracle protocol over a child process's stdio
//! or a TCP socket.
//!
//! A connection is one ordered byte stream shared by all callers. Each call
//! takes an in-flight slot, writes its request under the writer lock and
//! waits on a private channel; a reader thread routes responses to waiters
//! by id, so responses may come back in any order. A malformed line or a
//! closed stream fails every waiter and marks the connection dead; the next
//! call reconnects.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Write};
use std::net::{Shutdown, TcpStream, ToSocketAddrs};
use std::process::{Child, Command, Stdio};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::mpsc::{self, RecvTimeoutError, SyncSender};
use std::sync::{Arc, Condvar, Mutex, MutexGuard};
use std::thread;
use std::time::Duration;

use super::protocol::{self, Request, Response};
use super::{check_finite, LogProbOracle, OracleError, OracleSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct RemoteConfig {
    pub meta_timeout: Duration,
    pub request_timeout: Duration,
    pub max_in_flight: usize,
}

impl Default for RemoteConfig {
    fn default() -> Self {
        Self {
            meta_timeout: Duration::from_secs(10),
            request_timeout: Duration::from_secs(600),
            max_in_flight: 32,
        }
    }
}

enum ConnError {
    Transport(String),
    Protocol(String),
}

type Reply = Result<Response, ConnError>;

#[derive(Default)]
struct State {
    waiters: HashMap<u64, SyncSender<Reply>>,
    in_flight: usize,
    failed: Option<String>,
}

#[derive(Default)]
struct Shared {
    state: Mutex<State>,
    slots: Condvar,
}

impl Shared {
    fn lock(&self) -> MutexGuard<'_, State> {
        self.state.lock().unwrap_or_else(|e| e.into_inner())
    }

    fn fail(&self, err: impl Fn() -> ConnError, reason: String) {
        let mut st = self.lock();
        if st.failed.is_none() {
            st.failed = Some(reason);
        }
        for (_, tx) in st.waiters.drain() {
            let _ = tx.try_send(Err(err()));
        }
        self.slots.notify_all();
    }

    fn release(&self, id: u64) {
        let mut st = self.lock();
        st.waiters.remove(&id);
        st.in_flight -= 1;
        self.slots.notify_one();
    }
}

struct Connection {
    shared: Arc<Shared>,
    writer: Mutex<Box<dyn Write + Send>>,
    next_id: AtomicU64,
    max_in_flight: usize,
    child: Mutex<Option<Child>>,
    socket: Option<TcpStream>,
}

impl Connection {
    fn open(spec: &OracleSpec, config: &RemoteConfig) -> Result<Self, String> {
        let (reader, writer, child, socket): (Box<dyn BufRead + Send>, Box<dyn Write + Send>, _, _) = match spec {
            OracleSpec::Command(cmd) => {
                let mut child = Command::new("sh")
                    .arg("-c")
                    .arg(cmd)
                    .stdin(Stdio::piped())
                    .stdout(Stdio::piped())
                    .stderr(Stdio::inherit())
                    .spawn()
                    .map_err(|e| format!("cannot spawn `{cmd}`: {e}"))?;
                let stdin = child.stdin.take().expect("piped stdin");
                let stdout = child.stdout.take().expect("piped stdout");
                (Box::new(BufReader::new(stdout)), Box::new(stdin), Some(child), None)
            }
            OracleSpec::Tcp(addr) => {
                let addrs: Vec<_> = addr
                    .to_socket_addrs()
                    .map_err(|e| format!("cannot resolve {addr}: {e}"))?
                    .collect();
                let mut last = format!("no addresses for {addr}");
                let mut stream = None;
                for a in addrs {
                    match TcpStream::connect_timeout(&a, config.meta_timeout) {
                        Ok(s) => {
                            stream = Some(s);
                            break;
                        }
                        Err(e) => last = format!("cannot connect to {a}: {e}"),
                    }
                }
                let stream = stream.ok_or(last)?;
                let _ = stream.set_nodelay(true);
                let read_half = stream.try_clone().map_err(|e| e.to_string())?;
                let write_half = stream.try_clone().map_err(|e| e.to_string())?;
                (
                    Box::new(BufReader::new(read_half)),
                    Box::new(write_half),
                    None,
                    Some(stream),
                )
            }
            OracleSpec::NGram(_) => return Err("not a remote oracle".into()),
        };

        let shared = Arc::new(Shared::default());
        let reader_shared = Arc::clone(&shared);
        thread::Builder::new()
            .name("oracle-reader".into())
            .spawn(move || read_loop(reader, &reader_shared))
            .map_err(|e| e.to_string())?;

        Ok(Self {
            shared,
            writer: Mutex::new(writer),
            next_id: AtomicU64::new(1),
            max_in_flight: config.max_in_flight.max(1),
            child: Mutex::new(child),
            socket,
        })
    }

    fn is_failed(&self) -> bool {
        self.shared.lock().failed.is_some()
    }

    fn call(&self, build: impl FnOnce(u64) -> Request, timeout: Duration) -> Reply {
        let (id, rx) = {
            let mut st = self.shared.lock();
            while st.failed.is_none() && st.in_flight >= self.max_in_flight {
                st = self.shared.slots.wait(st).unwrap_or_else(|e| e.into_inner());
            }
            if let Some(reason) = &st.failed {
                return Err(ConnError::Transport(reason.clone()));
            }
            let id = self.next_id.fetch_add(1, Ordering::Relaxed);
            let (tx, rx) = mpsc::sync_channel(1);
            st.waiters.insert(id, tx);
            st.in_flight += 1;
            (id, rx)
        };

        let line = match protocol::encode(&build(id)) {
            Ok(line) => line,
            Err(e) => {
                self.shared.release(id);
                return Err(ConnError::Protocol(e.to_string()));
            }
        };
        let written = {
            let mut w = self.writer.lock().unwrap_or_else(|e| e.into_inner());
            w.write_all(line.as_bytes()).and_then(|_| w.flush())
        };
        if let Err(e) = written {
            let msg = format!("write failed: {e}");
            self.shared.fail(|| ConnError::Transport(msg.clone()), msg.clone());
            self.shared.release(id);
            return Err(ConnError::Transport(msg));
        }

        let reply = match rx.recv_timeout(timeout) {
            Ok(reply) => reply,
            Err(RecvTimeoutError::Timeout) => Err(ConnError::Transport(format!(
                "no response to request {id} within {timeout:?}"
            ))),
            Err(RecvTimeoutError::Disconnected) => Err(ConnError::Transport("connection closed".into())),
        };
        self.shared.release(id);
        reply
    }
}

impl Drop for Connection {
    fn drop(&mut self) {
        if let Some(sock) = &self.socket {
            let _ = sock.shutdown(Shutdown::Both);
        }
        if let Some(mut child) = self.child.lock().unwrap_or_else(|e| e.into_inner()).take() {
            let _ = child.kill();
            let _ = child.wait();
        }
    }
}

fn read_loop(mut reader: Box<dyn BufRead + Send>, shared: &Shared) {
    let mut line = String::new();
    loop {
        line.clear();
        match reader.read_line(&mut line) {
            Ok(0) => {
                shared.fail(|| ConnError::Transport("connection closed".into()), "connection closed".into());
                return;
            }
            Ok(_) => match protocol::decode_response(&line) {
                Ok(resp) => {
                    let st = shared.lock();
                    // Late replies to timed-out requests have no waiter.
                    if let Some(tx) = st.waiters.get(&resp.id) {
                        let _ = tx.try_send(Ok(resp));
                    }
                }
                Err(e) => {
                    let msg = format!("malformed line {:?}: {e}", line.trim_end());
                    shared.fail(|| ConnError::Protocol(msg.clone()), msg.clone());
                    return;
                }
            },
            Err(e) => {
                let msg = format!("read failed: {e}");
                shared.fail(|| ConnError::Transport(msg.clone()), msg.clone());
                return;
            }
        }
    }
}

/// Metadata announced by a remote oracle in its `meta` reply.
#[derive(Debug, Clone, PartialEq)]
pub struct RemoteMeta {
    pub name: String,
    pub context_length: usize,
    pub scores_first_token: Option<bool>,
}

pub struct RemoteOracle {
    spec: OracleSpec,
    config: RemoteConfig,
    meta: RemoteMeta,
    conn: Mutex<Arc<Connection>>,
}

impl std::fmt::Debug for RemoteOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RemoteOracle")
            .field("spec", &self.spec)
            .field("meta", &self.meta)
            .finish()
    }
}

impl RemoteOracle {
    pub fn connect(spec: OracleSpec, config: RemoteConfig) -> Result<Self, OracleError> {
        let (conn, meta) = handshake(&spec, &config)?;
        Ok(Self {
            spec,
            config,
            meta,
            conn: Mutex::new(Arc::new(conn)),
        })
    }

    pub fn meta(&self) -> &RemoteMeta {
        &self.meta
    }

    fn connection(&self) -> Result<Arc<Connection>, OracleError> {
        let mut guard = self.conn.lock().unwrap_or_else(|e| e.into_inner());
        if guard.is_failed() {
            let (conn, _) = handshake(&self.spec, &self.config).map_err(|e| OracleError::Transport {
                oracle: self.meta.name.clone(),
                message: format!("reconnect failed: {e}"),
            })?;
            *guard = Arc::new(conn);
        }
        Ok(Arc::clone(&guard))
    }

    fn request(&self, build: impl FnOnce(u64) -> Request) -> Result<Response, OracleError> {
        let conn = self.connection()?;
        let resp = conn.call(build, self.config.request_timeout).map_err(|e| self.conn_error(e))?;
        match resp.error {
            Some(message) => Err(OracleError::Semantic {
                oracle: self.meta.name.clone(),
                message,
            }),
            None => Ok(resp),
        }
    }

    fn conn_error(&self, e: ConnError) -> OracleError {
        let oracle = self.meta.name.clone();
        match e {
            ConnError::Transport(message) => OracleError::Transport { oracle, message },
            ConnError::Protocol(message) => OracleError::Protocol { oracle, message },
        }
    }

    fn protocol_error(&self, message: impl Into<String>) -> OracleError {
        OracleError::Protocol {
            oracle: self.meta.name.clone(),
            message: message.into(),
        }
    }
}

fn handshake(spec: &OracleSpec, config: &RemoteConfig) -> Result<(Connection, RemoteMeta), OracleError> {
    let label = spec.to_string();
    let open_err = |message: String| OracleError::Open {
        oracle: label.clone(),
        message,
    };
    let conn = Connection::open(spec, config).map_err(&open_err)?;
    let resp = conn.call(Request::meta, config.meta_timeout).map_err(|e| match e {
        ConnError::Transport(m) => open_err(format!("meta handshake failed: {m}")),
        ConnError::Protocol(m) => open_err(format!("meta handshake: {m}")),
    })?;
    if let Some(err) = resp.error {
        return Err(open_err(format!("meta refused: {err}")));
    }
    let (Some(name), Some(context_length)) = (resp.name, resp.context_length) else {
        return Err(open_err("meta response missing `name` or `context_length`".into()));
    };
    let meta = RemoteMeta {
        name,
        context_length: context_length as usize,
        scores_first_token: resp.scores_first_token,
    };
    Ok((conn, meta))
}

impl LogProbOracle for RemoteOracle {
    fn name(&self) -> &str {
        &self.meta.name
    }

    fn context_length(&self) -> usize {
        self.meta.context_length
    }

    fn score(&self, text: &str) -> Result<f64, OracleError> {
        let resp = self.request(|id| Request::logprob(id, text))?;
        let value = resp
            .logprob
            .ok_or_else(|| self.protocol_error("logprob response without `logprob`"))?;
        check_finite(&self.meta.name, value)
    }

    fn score_batch(&self, texts: &[&str]) -> Result<Vec<f64>, OracleError> {
        let owned = texts.iter().map(|t| t.to_string()).collect();
        let resp = self.request(|id| Request::logprob_batch(id, owned))?;
        let values = resp
            .logprobs
            .ok_or_else(|| self.protocol_error("batch response without `logprobs`"))?;
        if values.len() != texts.len() {
            return Err(self.protocol_error(format!(
                "batch of {} texts answered with {} values",
                texts.len(),
                values.len()
            )));
        }
        values.into_iter().map(|v| check_finite(&self.meta.name, v)).collect()
    }
}
