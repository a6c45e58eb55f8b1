//! graph6 interchange format.
//!
//! Order prefix: one byte `n + 63` for `n <= 62`, otherwise `126` followed by
//! three 6-bit groups. The upper triangle is then packed column by column
//! (`x(0,1), x(0,2), x(1,2), x(0,3), ...`) into big-endian 6-bit groups, each
//! offset by 63, zero padded at the end.

use crate::error::{GraphError, MAX_ORDER};
use crate::graph::Graph;

const HEADER: &str = ">>graph6<<";

pub fn encode_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are printable ASCII")
}

fn format_error(offset: usize, reason: impl Into<String>) -> GraphError {
    GraphError::Graph6 { offset, reason: reason.into() }
}

pub fn decode_graph6(input: &[u8]) -> Result<Graph, GraphError> {
    let mut start = 0;
    if input.starts_with(HEADER.as_bytes()) {
        start = HEADER.len();
    }
    let mut end = input.len();
    while end > start && matches!(input[end - 1], b'\n' | b'\r') {
        end -= 1;
    }
    let body = &input[start..end];
    let value = |pos: usize| -> Result<u8, GraphError> {
        let b = body[pos];
        if (63..=126).contains(&b) {
            Ok(b - 63)
        } else {
            Err(format_error(start + pos, format!("byte {b:#04x} outside the range 63..=126")))
        }
    };
    if body.is_empty() {
        return Err(format_error(start, "missing order prefix"));
    }
    let (n, mut pos) = if body[0] == 126 {
        if body.len() < 4 {
            return Err(format_error(start + body.len(), "truncated long order prefix"));
        }
        if body[1] == 126 {
            return Err(format_error(start + 1, "orders above 258047 are not supported"));
        }
        let mut n = 0usize;
        for k in 1..4 {
            n = (n << 6) | value(k)? as usize;
        }
        if n < 63 {
            return Err(format_error(start, format!("order {n} must use the short prefix")));
        }
        (n, 4)
    } else {
        (value(0)? as usize, 1)
    };
    if n == 0 {
        return Err(GraphError::EmptyGraph);
    }
    if n > MAX_ORDER {
        return Err(GraphError::Capacity { requested: n, max: MAX_ORDER });
    }
    let bits = n * (n - 1) / 2;
    let groups = bits.div_ceil(6);
    if body.len() - pos != groups {
        return Err(format_error(
            start + body.len().min(pos + groups),
            format!("expected {groups} edge bytes for order {n}, found {}", body.len() - pos),
        ));
    }
    let mut rows = vec![0u64; n];
    let mut k = 0;
    'outer: for j in 1..n {
        for i in 0..j {
            let group = value(pos + k / 6)?;
            if group & (1 << (5 - k % 6)) != 0 {
                rows[i] |= 1 << j;
                rows[j] |= 1 << i;
            }
            k += 1;
            if k == bits {
                break 'outer;
            }
        }
    }
    if bits % 6 != 0 {
        pos += groups - 1;
        let padding = 6 - bits % 6;
        if value(pos)? & ((1 << padding) - 1) != 0 {
            return Err(format_error(start + pos, "nonzero padding bits"));
        }
    }
    Ok(Graph::from_rows_unchecked(rows))
}
