//! Client for out-of-process evaluators speaking newline-delimited JSON.
//!
//! ```text
//! -> {"hello": {"protocol": 1, "game": "hex7"}}
//! <- {"ok": {"protocol": 1}}
//! -> {"id": 1, "game": "hex7", "states": ["", "d4 c5"]}
//! <- {"id": 1, "evals": [{"value": 0.0, "priors": [...]}, ...]}
//! <- {"id": 1, "error": "unknown game"}
//! ```
//!
//! States travel as the move sequence from the initial position in the
//! game's own notation. One request is in flight per connection.

use std::io::{BufRead, BufReader, ErrorKind, Write};
use std::net::TcpStream;
use std::process::{Child, Command, Stdio};
use std::sync::Mutex;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{EvalError, Evaluation, Evaluator};
use crate::game::GameState;

pub const PROTOCOL_VERSION: u32 = 1;

/// Environment variable holding `host:port` of the evaluation server.
pub const ADDR_ENV: &str = "BATCHMCTS_EVAL_ADDR";

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Hello {
    pub hello: HelloBody,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct HelloBody {
    pub protocol: u32,
    pub game: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct HelloReply {
    pub ok: ProtocolVersion,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ProtocolVersion {
    pub protocol: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Request {
    pub id: u64,
    pub game: String,
    pub states: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct WireEval {
    pub value: f64,
    pub priors: Vec<f64>,
}

/// Either `evals` or `error` is present.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Response {
    pub id: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evals: Option<Vec<WireEval>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

struct Connection {
    reader: Box<dyn BufRead + Send>,
    writer: Box<dyn Write + Send>,
    next_id: u64,
}

impl Connection {
    fn send_line<T: Serialize>(&mut self, msg: &T) -> Result<(), EvalError> {
        let mut line = serde_json::to_string(msg).map_err(|e| EvalError::Malformed(e.to_string()))?;
        line.push('\n');
        self.writer
            .write_all(line.as_bytes())
            .and_then(|_| self.writer.flush())
            .map_err(transport)
    }

    fn read_line(&mut self) -> Result<String, EvalError> {
        let mut line = String::new();
        let n = self.reader.read_line(&mut line).map_err(transport)?;
        if n == 0 {
            return Err(EvalError::Transport("evaluator closed the connection".into()));
        }
        Ok(line)
    }
}

fn transport(e: std::io::Error) -> EvalError {
    match e.kind() {
        ErrorKind::WouldBlock | ErrorKind::TimedOut => {
            EvalError::Transport(format!("timed out: {e}"))
        }
        _ => EvalError::Transport(e.to_string()),
    }
}

/// Evaluator backed by a remote process.
pub struct WireEvaluator {
    game: String,
    conn: Mutex<Connection>,
    child: Option<Mutex<Child>>,
}

impl std::fmt::Debug for WireEvaluator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WireEvaluator").field("game", &self.game).finish()
    }
}

impl WireEvaluator {
    /// Performs the handshake over arbitrary streams.
    pub fn from_streams(
        reader: impl BufRead + Send + 'static,
        writer: impl Write + Send + 'static,
        game: &str,
    ) -> Result<Self, EvalError> {
        let mut conn = Connection {
            reader: Box::new(reader),
            writer: Box::new(writer),
            next_id: 1,
        };
        conn.send_line(&Hello {
            hello: HelloBody {
                protocol: PROTOCOL_VERSION,
                game: game.to_string(),
            },
        })?;
        let line = conn.read_line()?;
        let reply: HelloReply = serde_json::from_str(line.trim()).map_err(|e| {
            EvalError::Protocol(format!("bad handshake reply `{}`: {e}", line.trim()))
        })?;
        if reply.ok.protocol != PROTOCOL_VERSION {
            return Err(EvalError::Protocol(format!(
                "server speaks protocol {}, client speaks {PROTOCOL_VERSION}",
                reply.ok.protocol
            )));
        }
        Ok(WireEvaluator {
            game: game.to_string(),
            conn: Mutex::new(conn),
            child: None,
        })
    }

    pub fn connect(addr: &str, game: &str, timeout: Duration) -> Result<Self, EvalError> {
        let stream = TcpStream::connect(addr).map_err(transport)?;
        stream.set_read_timeout(Some(timeout)).map_err(transport)?;
        stream.set_nodelay(true).map_err(transport)?;
        let reader = BufReader::new(stream.try_clone().map_err(transport)?);
        Self::from_streams(reader, stream, game)
    }

    /// Connects to the address in `BATCHMCTS_EVAL_ADDR`.
    pub fn connect_from_env(game: &str, timeout: Duration) -> Result<Self, EvalError> {
        let addr = std::env::var(ADDR_ENV)
            .map_err(|_| EvalError::Transport(format!("{ADDR_ENV} is not set")))?;
        Self::connect(&addr, game, timeout)
    }

    /// Spawns `program` and talks to it over its standard streams.
    pub fn spawn(program: &str, args: &[String], game: &str) -> Result<Self, EvalError> {
        let mut child = Command::new(program)
            .args(args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()
            .map_err(transport)?;
        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = BufReader::new(child.stdout.take().expect("piped stdout"));
        let mut eval = Self::from_streams(stdout, stdin, game)?;
        eval.child = Some(Mutex::new(child));
        Ok(eval)
    }

    pub fn game(&self) -> &str {
        &self.game
    }

    /// Sends raw state strings and returns the raw evaluations.
    pub fn request(&self, states: Vec<String>) -> Result<Vec<WireEval>, EvalError> {
        let mut conn = self.conn.lock().expect("wire connection poisoned");
        let id = conn.next_id;
        conn.next_id += 1;
        let expected = states.len();
        conn.send_line(&Request {
            id,
            game: self.game.clone(),
            states,
        })?;
        let line = conn.read_line()?;
        let resp: Response = serde_json::from_str(line.trim())
            .map_err(|e| EvalError::Malformed(format!("`{}`: {e}", line.trim())))?;
        if let Some(message) = resp.error {
            return Err(EvalError::Remote { id: resp.id, message });
        }
        if resp.id != id {
            return Err(EvalError::Malformed(format!(
                "response id {} for request {id}",
                resp.id
            )));
        }
        let evals = resp
            .evals
            .ok_or_else(|| EvalError::Malformed("response has neither evals nor error".into()))?;
        if evals.len() != expected {
            return Err(EvalError::Misaligned {
                expected,
                got: evals.len(),
            });
        }
        Ok(evals)
    }
}

impl Drop for WireEvaluator {
    fn drop(&mut self) {
        if let Some(child) = &self.child {
            let mut child = child.lock().unwrap_or_else(|e| e.into_inner());
            let _ = child.kill();
            let _ = child.wait();
        }
    }
}

impl<G: GameState> Evaluator<G> for WireEvaluator {
    fn evaluate_batch(&self, states: &[G]) -> Result<Vec<Evaluation>, EvalError> {
        let strings = states.iter().map(|s| s.history_notation()).collect();
        let evals = self.request(strings)?;
        Ok(evals
            .into_iter()
            .map(|e| Evaluation {
                value: e.value.clamp(-1.0, 1.0),
                priors: e.priors,
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;
    use std::sync::{Arc, Mutex as StdMutex};

    #[derive(Clone, Default)]
    struct Sink(Arc<StdMutex<Vec<u8>>>);

    impl Write for Sink {
        fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
            self.0.lock().unwrap().extend_from_slice(buf);
            Ok(buf.len())
        }
        fn flush(&mut self) -> std::io::Result<()> {
            Ok(())
        }
    }

    #[test]
    fn handshake_and_request_lines_are_exact() {
        let sink = Sink::default();
        let server = "{\"ok\":{\"protocol\":1}}\n{\"id\":1,\"evals\":[{\"value\":0.5,\"priors\":[1.0]}]}\n";
        let eval = WireEvaluator::from_streams(Cursor::new(server.as_bytes().to_vec()), sink.clone(), "hex7").unwrap();
        let out = eval.request(vec!["d4 c5".into()]).unwrap();
        assert_eq!(out, vec![WireEval { value: 0.5, priors: vec![1.0] }]);
        let sent = String::from_utf8(sink.0.lock().unwrap().clone()).unwrap();
        let lines: Vec<&str> = sent.lines().collect();
        assert_eq!(lines[0], r#"{"hello":{"protocol":1,"game":"hex7"}}"#);
        assert_eq!(lines[1], r#"{"id":1,"game":"hex7","states":["d4 c5"]}"#);
    }

    #[test]
    fn version_mismatch_is_fatal() {
        let server = "{\"ok\":{\"protocol\":2}}\n";
        let err = WireEvaluator::from_streams(Cursor::new(server.as_bytes().to_vec()), Sink::default(), "hex7")
            .unwrap_err();
        assert!(matches!(err, EvalError::Protocol(_)));
    }

    #[test]
    fn error_and_disconnect_paths() {
        let server = "{\"ok\":{\"protocol\":1}}\n{\"id\":1,\"error\":\"unknown game\"}\n{\"id\":2,\"evals\":[]}\nnot json\n";
        let eval = WireEvaluator::from_streams(Cursor::new(server.as_bytes().to_vec()), Sink::default(), "hex7").unwrap();
        match eval.request(vec!["".into()]) {
            Err(EvalError::Remote { id: 1, message }) => assert_eq!(message, "unknown game"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            eval.request(vec!["".into()]),
            Err(EvalError::Misaligned { expected: 1, got: 0 })
        ));
        assert!(matches!(eval.request(vec!["".into()]), Err(EvalError::Malformed(_))));
        let err = eval.request(vec!["".into()]).unwrap_err();
        assert!(err.is_retriable(), "{err:?}");
    }
}
