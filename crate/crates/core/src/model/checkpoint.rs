//! Versioned text checkpoint.
//!
//! ```text
//! PAIRE1
//! seed 42
//! epochs 30
//! ...
//! tensor enc_ego_1.weight 2866 32
//! <one row per line>
//! ...
//! end
//! ```

use std::fs;
use std::io::Write;
use std::path::Path;

use super::params::{ModelParams, TENSOR_NAMES};
use super::train::TrainConfig;
use crate::error::{Error, Result};
use crate::textio::write_matrix_to;

pub const MAGIC: &str = "PAIRE1";

fn config_lines(cfg: &TrainConfig) -> Vec<(&'static str, String)> {
    vec![
        ("seed", cfg.seed.to_string()),
        ("epochs", cfg.epochs.to_string()),
        ("batch_size", cfg.batch_size.to_string()),
        ("learning_rate", cfg.learning_rate.to_string()),
        ("weight_ego", cfg.weight_ego.to_string()),
        ("weight_agg", cfg.weight_agg().to_string()),
        ("hidden1", cfg.hidden1.to_string()),
        ("hidden2", cfg.hidden2.to_string()),
        ("adam_beta1", cfg.adam_beta1.to_string()),
        ("adam_beta2", cfg.adam_beta2.to_string()),
        ("adam_eps", cfg.adam_eps.to_string()),
        ("loss_reduction", "mean".to_string()),
    ]
}

pub fn write_checkpoint<W: Write>(w: &mut W, cfg: &TrainConfig, params: &ModelParams) -> std::io::Result<()> {
    writeln!(w, "{MAGIC}")?;
    for (k, v) in config_lines(cfg) {
        writeln!(w, "{k} {v}")?;
    }
    for ((name, data), (rows, cols)) in TENSOR_NAMES
        .iter()
        .zip(params.tensors())
        .zip(params.tensor_shapes())
    {
        writeln!(w, "tensor {name} {rows} {cols}")?;
        let view = ndarray::ArrayView2::from_shape((rows, cols), data).expect("shape recorded");
        // reuse the matrix writer, minus its own header line
        let mut buf = Vec::new();
        write_matrix_to(&mut buf, view)?;
        let body = buf.splitn(2, |&b| b == b'\n').nth(1).unwrap_or(&[]);
        w.write_all(body)?;
    }
    writeln!(w, "end")
}

pub fn save_checkpoint(path: &Path, cfg: &TrainConfig, params: &ModelParams) -> Result<()> {
    let mut buf = Vec::new();
    write_checkpoint(&mut buf, cfg, params).map_err(|e| Error::io(path, e))?;
    fs::write(path, buf).map_err(|e| Error::io(path, e))
}

pub fn load_checkpoint(path: &Path) -> Result<(TrainConfig, ModelParams)> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_checkpoint(&text)
}

pub fn parse_checkpoint(text: &str) -> Result<(TrainConfig, ModelParams)> {
    let bad = |m: String| Error::Checkpoint(m);
    let mut lines = text.lines();
    if lines.next() != Some(MAGIC) {
        return Err(bad(format!("missing `{MAGIC}` header")));
    }
    let mut cfg = TrainConfig::default();
    let mut tensors: Vec<(String, usize, usize, Vec<f64>)> = Vec::new();
    let mut ended = false;
    while let Some(line) = lines.next() {
        let mut parts = line.split_whitespace();
        let key = match parts.next() {
            Some(k) => k,
            None => continue,
        };
        let rest: Vec<&str> = parts.collect();
        if key == "end" {
            ended = true;
            break;
        }
        if key == "tensor" {
            let [name, rows, cols] = rest[..] else {
                return Err(bad(format!("bad tensor line `{line}`")));
            };
            let rows: usize = rows.parse().map_err(|_| bad(format!("bad rows in `{line}`")))?;
            let cols: usize = cols.parse().map_err(|_| bad(format!("bad cols in `{line}`")))?;
            let mut data = Vec::with_capacity(rows * cols);
            for _ in 0..rows {
                let row = lines
                    .next()
                    .ok_or_else(|| bad(format!("{name}: truncated")))?;
                for tok in row.split_whitespace() {
                    data.push(tok.parse::<f64>().map_err(|_| bad(format!("{name}: bad value `{tok}`")))?);
                }
            }
            if data.len() != rows * cols {
                return Err(bad(format!("{name}: expected {} values, got {}", rows * cols, data.len())));
            }
            tensors.push((name.to_string(), rows, cols, data));
            continue;
        }
        let value = rest.first().copied().unwrap_or("");
        let num = |v: &str| -> Result<f64> { v.parse().map_err(|_| bad(format!("bad value for {key}: `{v}`"))) };
        let int = |v: &str| -> Result<usize> { v.parse().map_err(|_| bad(format!("bad value for {key}: `{v}`"))) };
        match key {
            "seed" => cfg.seed = value.parse().map_err(|_| bad(format!("bad seed `{value}`")))?,
            "epochs" => cfg.epochs = int(value)?,
            "batch_size" => cfg.batch_size = int(value)?,
            "learning_rate" => cfg.learning_rate = num(value)?,
            "weight_ego" => cfg.weight_ego = num(value)?,
            "hidden1" => cfg.hidden1 = int(value)?,
            "hidden2" => cfg.hidden2 = int(value)?,
            "adam_beta1" => cfg.adam_beta1 = num(value)?,
            "adam_beta2" => cfg.adam_beta2 = num(value)?,
            "adam_eps" => cfg.adam_eps = num(value)?,
            "weight_agg" | "loss_reduction" => {}
            other => return Err(bad(format!("unknown key `{other}`"))),
        }
    }
    if !ended {
        return Err(bad("missing `end` marker".into()));
    }
    if tensors.len() != TENSOR_NAMES.len() {
        return Err(bad(format!("expected {} tensors, found {}", TENSOR_NAMES.len(), tensors.len())));
    }
    for ((name, ..), expected) in tensors.iter().zip(TENSOR_NAMES) {
        if name != expected {
            return Err(bad(format!("expected tensor {expected}, found {name}")));
        }
    }

    let f = tensors[0].1;
    let mut params = ModelParams::zeros(f, cfg.hidden1, cfg.hidden2);
    let shapes = params.tensor_shapes();
    for ((name, rows, cols, _), shape) in tensors.iter().zip(&shapes) {
        if (*rows, *cols) != *shape {
            return Err(bad(format!("{name}: shape {rows}x{cols}, expected {}x{}", shape.0, shape.1)));
        }
    }
    for (dst, (.., data)) in params.tensors_mut().into_iter().zip(&tensors) {
        dst.copy_from_slice(data);
    }
    Ok((cfg, params))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_preserves_everything() {
        let cfg = TrainConfig {
            seed: 123,
            hidden1: 3,
            hidden2: 2,
            weight_ego: 0.3,
            ..TrainConfig::default()
        };
        let params = ModelParams::init(7, 3, 2, 5);
        let mut buf = Vec::new();
        write_checkpoint(&mut buf, &cfg, &params).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("PAIRE1\n"));
        let (c2, p2) = parse_checkpoint(&text).unwrap();
        assert_eq!(c2, cfg);
        assert_eq!(p2, params);
    }

    #[test]
    fn rejects_wrong_magic_and_truncation() {
        assert!(parse_checkpoint("PAIRE0\nend\n").is_err());
        let params = ModelParams::init(3, 1, 1, 0);
        let mut buf = Vec::new();
        write_checkpoint(&mut buf, &TrainConfig { hidden1: 1, hidden2: 1, ..Default::default() }, &params).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let cut = &text[..text.len() / 2];
        assert!(matches!(parse_checkpoint(cut), Err(Error::Checkpoint(_))));
    }
}
