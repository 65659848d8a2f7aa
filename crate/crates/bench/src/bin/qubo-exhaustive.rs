//! Exhaustive QUBO solver speaking the external sampler protocol on
//! stdin/stdout. Meant for testing sampler adapters on small models.

use std::io::Read;
use std::process::ExitCode;

use crackseg::qseg::{SamplerRequest, SamplerResponse};

const MAX_VARS: usize = 24;

fn main() -> ExitCode {
    let mut input = String::new();
    if let Err(e) = std::io::stdin().read_to_string(&mut input) {
        eprintln!("error: {e}");
        return ExitCode::from(3);
    }
    let req: SamplerRequest = match serde_json::from_str(&input) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: bad request: {e}");
            return ExitCode::from(2);
        }
    };
    let q = match req.to_model() {
        Ok(q) if q.n_vars() <= MAX_VARS => q,
        Ok(q) => {
            eprintln!(
                "error: {} variables exceeds the limit of {MAX_VARS}",
                q.n_vars()
            );
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let n = q.n_vars();
    let mut best = (f64::INFINITY, 0u64);
    let mut x = vec![false; n];
    for bits in 0..1u64 << n {
        for (i, xi) in x.iter_mut().enumerate() {
            *xi = bits >> i & 1 == 1;
        }
        let e = q.energy(&x);
        if e < best.0 {
            best = (e, bits);
        }
    }
    let resp = SamplerResponse {
        assignment: (0..n).map(|i| (best.1 >> i & 1) as u8).collect(),
        energy: Some(best.0),
    };
    println!(
        "{}",
        serde_json::to_string(&resp).expect("response serializes")
    );
    ExitCode::SUCCESS
}
