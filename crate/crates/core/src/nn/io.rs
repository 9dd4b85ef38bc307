//! Tensor serialization: little-endian f32 payloads with explicit shapes,
//! one container section per named tensor.

use ndarray::{Array1, Array2};

use crate::container::{Container, ContainerError};
use crate::nn::{LstmParams, ModelConfig, ParamSet};

fn tensor_payload(shape: &[usize], data: &[f32]) -> Vec<u8> {
    let mut out = Vec::with_capacity(4 + shape.len() * 8 + data.len() * 4);
    out.extend_from_slice(&(shape.len() as u32).to_le_bytes());
    for &d in shape {
        out.extend_from_slice(&(d as u64).to_le_bytes());
    }
    for &v in data {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

fn parse_payload(name: &str, bytes: &[u8]) -> Result<(Vec<usize>, Vec<f32>), ContainerError> {
    let malformed = |detail: &str| ContainerError::MalformedSection {
        name: name.to_string(),
        detail: detail.to_string(),
    };
    if bytes.len() < 4 {
        return Err(malformed("missing rank"));
    }
    let rank = u32::from_le_bytes(bytes[0..4].try_into().unwrap()) as usize;
    let mut offset = 4;
    let mut shape = Vec::with_capacity(rank);
    for _ in 0..rank {
        if bytes.len() < offset + 8 {
            return Err(malformed("missing dimension"));
        }
        shape.push(u64::from_le_bytes(bytes[offset..offset + 8].try_into().unwrap()) as usize);
        offset += 8;
    }
    let expected: usize = shape.iter().product();
    if bytes.len() != offset + expected * 4 {
        return Err(malformed("payload length does not match shape"));
    }
    let mut data = Vec::with_capacity(expected);
    for chunk in bytes[offset..].chunks_exact(4) {
        data.push(f32::from_le_bytes(chunk.try_into().unwrap()));
    }
    Ok((shape, data))
}

/// Appends every tensor of the set as `tensor.<name>` sections.
pub fn write_params(container: &mut Container, params: &ParamSet<f32>) {
    let shapes = params.named_shapes();
    for ((name, slice), (_, shape)) in params.named_slices().into_iter().zip(shapes) {
        container.add(&format!("tensor.{name}"), tensor_payload(&shape, slice));
    }
}

fn read_tensor2(
    container: &Container,
    name: &str,
    rows: usize,
    cols: usize,
) -> Result<Array2<f32>, ContainerError> {
    let section = format!("tensor.{name}");
    let (shape, data) = parse_payload(&section, container.require(&section)?)?;
    if shape != [rows, cols] {
        return Err(ContainerError::MalformedSection {
            name: section,
            detail: format!("shape {shape:?}, expected [{rows}, {cols}]"),
        });
    }
    Ok(Array2::from_shape_vec((rows, cols), data).expect("validated shape"))
}

fn read_tensor1(
    container: &Container,
    name: &str,
    len: usize,
) -> Result<Array1<f32>, ContainerError> {
    let section = format!("tensor.{name}");
    let (shape, data) = parse_payload(&section, container.require(&section)?)?;
    if shape != [len] {
        return Err(ContainerError::MalformedSection {
            name: section,
            detail: format!("shape {shape:?}, expected [{len}]"),
        });
    }
    Ok(Array1::from_vec(data))
}

/// Reads a full parameter set laid out for `config`.
pub fn read_params(
    container: &Container,
    config: &ModelConfig,
) -> Result<ParamSet<f32>, ContainerError> {
    let e = config.embed_dim;
    let d = config.input_dim();
    let h = config.lstm_units;

    let mut embeddings = Vec::with_capacity(config.feature_count());
    for (k, &v) in config.feature_vocab_sizes.iter().enumerate() {
        embeddings.push(read_tensor2(container, &format!("emb.{k}"), v, e)?);
    }
    let lstm = |dir: &str| -> Result<LstmParams<f32>, ContainerError> {
        Ok(LstmParams {
            w_x: read_tensor2(container, &format!("{dir}.w_x"), 4 * h, d)?,
            w_h: read_tensor2(container, &format!("{dir}.w_h"), 4 * h, h)?,
            b: read_tensor1(container, &format!("{dir}.b"), 4 * h)?,
        })
    };
    let fwd = lstm("fwd")?;
    let bwd = lstm("bwd")?;
    Ok(ParamSet {
        embeddings,
        fwd,
        bwd,
        dense_w: read_tensor2(container, "dense.w", config.dense_units, 2 * h)?,
        dense_b: read_tensor1(container, "dense.b", config.dense_units)?,
        out_w: read_tensor2(container, "out.w", config.label_count, config.dense_units)?,
        out_b: read_tensor1(container, "out.b", config.label_count)?,
    })
}
