use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{anyhow, Context};
use fwdest::report::{estimate_header, estimate_line};
use fwdest::{Alphabet, Schedules, StreamingEstimator};

use crate::{invalid, runtime, Outcome};

/// `"a,b,c"` names three symbols; `"abc"` does too.
fn parse_alphabet(spec: &str) -> anyhow::Result<Alphabet> {
    let names: Vec<String> = if spec.contains(',') {
        spec.split(',').map(|s| s.trim().to_string()).collect()
    } else {
        spec.chars().map(String::from).collect()
    };
    Alphabet::new(names).map_err(|e| anyhow!("invalid --alphabet {spec:?}: {e}"))
}

/// Symbol indices with 1-based line numbers for error messages.
fn parse_symbols(text: &str, alphabet: &Alphabet, lines: bool) -> anyhow::Result<Vec<u8>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lookup = |token: &str| {
            alphabet
                .index_of(token)
                .ok_or_else(|| anyhow!("line {}: unknown symbol {token:?}", i + 1))
        };
        if lines {
            let token = line.trim();
            if !token.is_empty() {
                out.push(lookup(token)?);
            }
        } else {
            let mut buf = [0u8; 4];
            for c in line.chars().filter(|c| !c.is_whitespace()) {
                out.push(lookup(c.encode_utf8(&mut buf))?);
            }
        }
    }
    Ok(out)
}

pub fn run(file: &Path, alphabet: &str, lines: bool, final_only: bool) -> Outcome {
    let alphabet = parse_alphabet(alphabet).map_err(invalid)?;
    if !lines && alphabet.symbols().iter().any(|s| s.chars().count() != 1) {
        return Err(invalid(anyhow!("multi-character symbols need --lines")));
    }
    let text = fs::read_to_string(file)
        .with_context(|| format!("cannot read {}", file.display()))
        .map_err(runtime)?;
    let symbols = parse_symbols(&text, &alphabet, lines).map_err(invalid)?;
    if symbols.is_empty() {
        return Err(invalid(anyhow!("{} holds no symbols", file.display())));
    }

    let horizon = (symbols.len() - 1).max(1);
    let mut est = StreamingEstimator::new(alphabet.clone(), Schedules::default(), horizon).map_err(runtime)?;
    let stdout = io::stdout();
    let mut w = BufWriter::new(stdout.lock());
    let mut emit = |line: String| writeln!(w, "{line}").map_err(runtime);
    emit(estimate_header(&alphabet))?;
    let last = symbols.len() - 1;
    for (n, &x) in symbols.iter().enumerate() {
        est.push(x).map_err(runtime)?;
        if !final_only || n == last {
            emit(estimate_line(n, &est.current_distribution().map_err(runtime)?))?;
        }
    }
    w.flush().map_err(runtime)
}
