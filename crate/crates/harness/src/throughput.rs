use batchmcts_core::eval::LatencyModel;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThroughputRow {
    pub size: usize,
    pub batches_per_second: f64,
    pub inferences_per_second: f64,
}

pub fn throughput_table(model: &LatencyModel, sizes: &[usize]) -> Vec<ThroughputRow> {
    sizes
        .iter()
        .map(|&size| ThroughputRow {
            size,
            batches_per_second: model.batches_per_second(size),
            inferences_per_second: model.throughput(size),
        })
        .collect()
}

pub fn render(rows: &[ThroughputRow]) -> String {
    let mut out = String::from("size,batches_per_second,inferences_per_second\n");
    for r in rows {
        out.push_str(&format!("{},{:.2},{:.2}\n", r.size, r.batches_per_second, r.inferences_per_second));
    }
    out
}
