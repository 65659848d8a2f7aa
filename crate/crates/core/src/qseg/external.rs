//! Adapter for samplers that live outside the process.
//!
//! Request: `{"n": int, "linear": [float], "quadratic": [[i, j, float]]}`.
//! Response: `{"assignment": [0|1], "energy": float}`.
//!
//! The request goes to a subprocess on stdin (response on stdout) or is
//! POSTed to an HTTP endpoint. The reported energy is never trusted: it is
//! recomputed from the returned assignment.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use serde::{Deserialize, Serialize};

use super::anneal::SampleResult;
use super::graph::QuboModel;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Endpoint {
    Command(PathBuf),
    Http(String),
}

impl Endpoint {
    /// Parses `cmd:PATH` or `http:URL`. A bare `http://` or `https://` URL is
    /// also accepted.
    pub fn parse(s: &str) -> Result<Self> {
        if let Some(path) = s.strip_prefix("cmd:") {
            if path.is_empty() {
                return Err(Error::InvalidConfig("empty sampler command".into()));
            }
            return Ok(Self::Command(PathBuf::from(path)));
        }
        if s.starts_with("http://") || s.starts_with("https://") {
            return Ok(Self::Http(s.to_string()));
        }
        if let Some(url) = s.strip_prefix("http:") {
            if url.is_empty() {
                return Err(Error::InvalidConfig("empty sampler URL".into()));
            }
            return Ok(Self::Http(url.to_string()));
        }
        Err(Error::InvalidConfig(format!(
            "unknown sampler endpoint {s:?} (expected cmd:PATH or http:URL)"
        )))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerRequest {
    pub n: usize,
    pub linear: Vec<f64>,
    pub quadratic: Vec<(usize, usize, f64)>,
}

impl SamplerRequest {
    pub fn from_model(q: &QuboModel) -> Self {
        Self {
            n: q.n_vars(),
            linear: q.linear().to_vec(),
            quadratic: q
                .quadratic()
                .iter()
                .map(|(&(i, j), &v)| (i, j, v))
                .collect(),
        }
    }

    pub fn to_model(&self) -> Result<QuboModel> {
        if self.linear.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: self.linear.len(),
            });
        }
        QuboModel::new(self.linear.clone(), self.quadratic.iter().copied())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerResponse {
    pub assignment: Vec<u8>,
    #[serde(default)]
    pub energy: Option<f64>,
}

/// Validates a response against the model and recomputes its energy.
pub fn accept_response(q: &QuboModel, resp: &SamplerResponse) -> Result<SampleResult> {
    if resp.assignment.len() != q.n_vars() {
        return Err(Error::LengthMismatch {
            expected: q.n_vars(),
            got: resp.assignment.len(),
        });
    }
    let mut assignment = Vec::with_capacity(resp.assignment.len());
    for &b in &resp.assignment {
        match b {
            0 => assignment.push(false),
            1 => assignment.push(true),
            other => {
                return Err(Error::MalformedResponse(format!(
                    "assignment value {other} is not binary"
                )))
            }
        }
    }
    let energy = q.energy(&assignment);
    Ok(SampleResult {
        assignment,
        energy,
        restarts_run: 1,
    })
}

fn parse_response(bytes: &[u8]) -> Result<SamplerResponse> {
    serde_json::from_slice(bytes).map_err(|e| Error::MalformedResponse(e.to_string()))
}

pub fn sample_external(q: &QuboModel, endpoint: &Endpoint) -> Result<SampleResult> {
    let req = SamplerRequest::from_model(q);
    let resp = match endpoint {
        Endpoint::Command(path) => {
            let body = serde_json::to_vec(&req).map_err(|e| Error::Transport(e.to_string()))?;
            let mut child = Command::new(path)
                .stdin(Stdio::piped())
                .stdout(Stdio::piped())
                .stderr(Stdio::piped())
                .spawn()
                .map_err(|e| Error::Transport(format!("{}: {e}", path.display())))?;
            {
                let mut stdin = child.stdin.take().expect("stdin is piped");
                stdin
                    .write_all(&body)
                    .map_err(|e| Error::Transport(e.to_string()))?;
            }
            let out = child
                .wait_with_output()
                .map_err(|e| Error::Transport(e.to_string()))?;
            if !out.status.success() {
                return Err(Error::Transport(format!(
                    "{} exited with {}: {}",
                    path.display(),
                    out.status,
                    String::from_utf8_lossy(&out.stderr).trim()
                )));
            }
            parse_response(&out.stdout)?
        }
        Endpoint::Http(url) => {
            let mut resp = ureq::post(url)
                .send_json(&req)
                .map_err(|e| Error::Transport(e.to_string()))?;
            let body = resp
                .body_mut()
                .read_to_vec()
                .map_err(|e| Error::Transport(e.to_string()))?;
            parse_response(&body)?
        }
    };
    accept_response(q, &resp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> QuboModel {
        QuboModel::new(vec![1.0, -2.0, 0.5], [(0, 1, 3.0), (1, 2, -1.0)]).unwrap()
    }

    #[test]
    fn endpoint_parsing() {
        assert_eq!(
            Endpoint::parse("cmd:/bin/solver").unwrap(),
            Endpoint::Command("/bin/solver".into())
        );
        assert_eq!(
            Endpoint::parse("http:http://localhost:9/x").unwrap(),
            Endpoint::Http("http://localhost:9/x".into())
        );
        assert_eq!(
            Endpoint::parse("http://localhost:9/x").unwrap(),
            Endpoint::Http("http://localhost:9/x".into())
        );
        assert!(Endpoint::parse("ftp:x").is_err());
        assert!(Endpoint::parse("cmd:").is_err());
    }

    #[test]
    fn request_wire_format() {
        let json = serde_json::to_value(SamplerRequest::from_model(&model())).unwrap();
        assert_eq!(
            json,
            serde_json::json!({
                "n": 3,
                "linear": [1.0, -2.0, 0.5],
                "quadratic": [[0, 1, 3.0], [1, 2, -1.0]]
            })
        );
    }

    #[test]
    fn wrong_length_is_rejected() {
        let resp = SamplerResponse {
            assignment: vec![0, 1],
            energy: Some(0.0),
        };
        let err = accept_response(&model(), &resp).unwrap_err();
        assert!(err.to_string().contains("length mismatch"));
    }

    #[test]
    fn reported_energy_is_recomputed() {
        let resp = SamplerResponse {
            assignment: vec![0, 1, 1],
            energy: Some(123.0),
        };
        let r = accept_response(&model(), &resp).unwrap();
        assert_eq!(r.energy, -2.0 + 0.5 - 1.0);
    }

    #[test]
    fn non_binary_is_malformed() {
        let resp = SamplerResponse {
            assignment: vec![0, 2, 1],
            energy: None,
        };
        assert!(matches!(
            accept_response(&model(), &resp),
            Err(Error::MalformedResponse(_))
        ));
    }

    #[cfg(unix)]
    fn script(dir: &std::path::Path, body: &str) -> PathBuf {
        use std::os::unix::fs::PermissionsExt;
        let path = dir.join("sampler.sh");
        std::fs::write(&path, format!("#!/bin/sh\ncat > /dev/null\n{body}\n")).unwrap();
        std::fs::set_permissions(&path, std::fs::Permissions::from_mode(0o755)).unwrap();
        path
    }

    #[cfg(unix)]
    #[test]
    fn command_transport_errors() {
        let dir = tempfile::tempdir().unwrap();
        let q = model();

        let p = script(dir.path(), r#"echo '{"assignment": [1, 0], "energy": 0}'"#);
        let err = sample_external(&q, &Endpoint::Command(p)).unwrap_err();
        assert!(matches!(
            err,
            Error::LengthMismatch {
                expected: 3,
                got: 2
            }
        ));

        let p = script(dir.path(), "echo 'not json'");
        assert!(matches!(
            sample_external(&q, &Endpoint::Command(p)),
            Err(Error::MalformedResponse(_))
        ));

        let p = script(dir.path(), "exit 4");
        assert!(matches!(
            sample_external(&q, &Endpoint::Command(p)),
            Err(Error::Transport(_))
        ));

        let missing = dir.path().join("does-not-exist");
        assert!(matches!(
            sample_external(&q, &Endpoint::Command(missing)),
            Err(Error::Transport(_))
        ));
    }

    #[test]
    fn http_transport_failure() {
        // Port 9 (discard) is not listening in the test environment.
        let err = sample_external(
            &model(),
            &Endpoint::Http("http://127.0.0.1:9/sample".into()),
        );
        assert!(matches!(err, Err(Error::Transport(_))));
    }
}
