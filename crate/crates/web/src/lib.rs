//! wasm-bindgen entry points for the browser demo in `www/`.

use wasm_bindgen::prelude::*;

pub mod ops;

#[wasm_bindgen]
pub fn specular_report(expr: &str, x: f64) -> Result<String, String> {
    ops::specular_report(expr, x)
}

#[wasm_bindgen]
pub fn solve_svg(config: &str, scheme: &str, h: f64) -> Result<String, String> {
    ops::solve_svg(config, scheme, h)
}

#[wasm_bindgen]
pub struct SweepOutput {
    svg: String,
    table: String,
}

#[wasm_bindgen]
impl SweepOutput {
    #[wasm_bindgen(getter)]
    pub fn svg(&self) -> String {
        self.svg.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn table(&self) -> String {
        self.table.clone()
    }
}

#[wasm_bindgen]
pub fn sweep(config: &str, schemes: &str, k_min: u32, k_max: u32) -> Result<SweepOutput, String> {
    ops::sweep(config, schemes, k_min, k_max).map(|(svg, table)| SweepOutput { svg, table })
}
