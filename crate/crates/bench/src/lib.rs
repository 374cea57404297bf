//! Fixtures shared by the benchmarks.

use rauzy_core::diagram::{DiagramMode, Family, RauzyDiagram};

pub fn diagram(family: Family, n: u32, mode: DiagramMode) -> RauzyDiagram {
    RauzyDiagram::build(&family.base(n).expect("valid size"), mode).expect("diagram builds")
}
