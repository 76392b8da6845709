use std::io::{self, BufRead, BufReader, Write};
use std::net::TcpListener;
use std::path::PathBuf;
use std::sync::Arc;
use std::thread;

use clap::Args;
use ordertest::ngram::load_model;
use ordertest::oracle::protocol::{decode_request, encode_response, salvage_id, Op, Request, Response};
use ordertest::oracle::{LogProbOracle, NGramOracle};

use crate::{usage, CliError};

#[derive(Debug, Args)]
pub(crate) struct ServeArgs {
    /// n-gram model file.
    #[arg(long)]
    model: PathBuf,
    /// Listen on this address instead of stdio, e.g. 127.0.0.1:7070. Port 0
    /// picks a free port; the bound address is printed to stderr.
    #[arg(long)]
    tcp: Option<String>,
    /// Name announced in the meta reply [default: ngram:<model file name>].
    #[arg(long)]
    name: Option<String>,
}

pub(crate) fn run(args: ServeArgs) -> Result<(), CliError> {
    let model = load_model(&args.model).map_err(usage)?;
    let name = args.name.clone().unwrap_or_else(|| {
        format!(
            "ngram:{}",
            args.model.file_name().map(|n| n.to_string_lossy()).unwrap_or_default()
        )
    });
    eprintln!(
        "oracle serve: model={} name={name} transport={}",
        args.model.display(),
        args.tcp.as_deref().unwrap_or("stdio")
    );
    let oracle = Arc::new(NGramOracle::new(name, Arc::new(model)));

    match &args.tcp {
        None => {
            let stdin = io::stdin();
            let stdout = io::stdout();
            serve_stream(stdin.lock(), stdout.lock(), oracle.as_ref()).map_err(usage)
        }
        Some(addr) => {
            let listener = TcpListener::bind(addr).map_err(|e| usage(format!("cannot bind {addr}: {e}")))?;
            let local = listener.local_addr().map_err(usage)?;
            eprintln!("listening on {local}");
            for stream in listener.incoming() {
                let stream = match stream {
                    Ok(s) => s,
                    Err(e) => {
                        eprintln!("accept failed: {e}");
                        continue;
                    }
                };
                let oracle = Arc::clone(&oracle);
                thread::spawn(move || {
                    let reader = match stream.try_clone() {
                        Ok(r) => BufReader::new(r),
                        Err(e) => return eprintln!("connection failed: {e}"),
                    };
                    if let Err(e) = serve_stream(reader, stream, oracle.as_ref()) {
                        eprintln!("connection ended: {e}");
                    }
                });
            }
            Ok(())
        }
    }
}

/// Answers requests line by line until the input closes.
fn serve_stream(input: impl BufRead, mut output: impl Write, oracle: &dyn LogProbOracle) -> io::Result<()> {
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let resp = match decode_request(&line) {
            Ok(req) => answer(&req, oracle),
            Err(e) => Response::error(salvage_id(&line).unwrap_or(0), format!("bad request: {e}")),
        };
        let encoded = encode_response(&resp)
            .or_else(|e| encode_response(&Response::error(resp.id, e.to_string())))
            .expect("error responses encode");
        output.write_all(encoded.as_bytes())?;
        output.flush()?;
    }
    Ok(())
}

fn answer(req: &Request, oracle: &dyn LogProbOracle) -> Response {
    match req.op {
        Op::Meta => Response {
            scores_first_token: Some(true),
            ..Response::meta(req.id, oracle.name(), oracle.context_length() as u64)
        },
        Op::Logprob => match &req.text {
            Some(text) => match oracle.score(text) {
                Ok(v) => Response::logprob(req.id, v),
                Err(e) => Response::error(req.id, e.to_string()),
            },
            None => Response::error(req.id, "logprob request without `text`"),
        },
        Op::LogprobBatch => match &req.texts {
            Some(texts) => {
                let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
                match oracle.score_batch(&refs) {
                    Ok(v) => Response::logprobs(req.id, v),
                    Err(e) => Response::error(req.id, e.to_string()),
                }
            }
            None => Response::error(req.id, "logprob_batch request without `texts`"),
        },
    }
}
