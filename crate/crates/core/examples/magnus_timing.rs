use hoinv::magnus::{graded_dims, DEFAULT_MEMORY_CAP};
use hoinv::{FieldSpec, GroupPresentation};
use std::time::Instant;

fn main() {
    let q = FieldSpec::Rationals;
    let comm = GroupPresentation::parse(&["a", "b"], &["[a,b]"]).unwrap();
    for d in [6, 7, 8] {
        let t = Instant::now();
        let n = graded_dims(&comm, q, d, DEFAULT_MEMORY_CAP).unwrap();
        println!("comm Q={d}: {n} in {:?}", t.elapsed());
    }
    let s = GroupPresentation::parse(&["a", "b", "c", "d"], &["[a,b][c,d]"]).unwrap();
    for d in [2, 3, 4] {
        let t = Instant::now();
        let n = graded_dims(&s, q, d, DEFAULT_MEMORY_CAP).unwrap();
        println!("surface Q={d}: {n} in {:?}", t.elapsed());
    }
}
