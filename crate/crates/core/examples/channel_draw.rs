//! Draws a clustered channel, prints its singular values and round-trips it
//! through the JSON dump format.

use hybridsim::channel::{ChannelModel, ChannelRealization};
use hybridsim::numerics::svd;

fn main() -> hybridsim::Result<()> {
    let model = ChannelModel::new(8, 4);
    let ch = model.realize(2024, 1);
    let h = ch.narrowband();
    println!("H is {}x{}, ||H||_F^2 = {:.3}", h.nrows(), h.ncols(), h.norm_squared());

    let s = svd(h)?;
    let top: Vec<String> = s.singular_values.iter().take(6).map(|v| format!("{v:.3}")).collect();
    println!("leading singular values: {}", top.join(", "));

    let json = ch.to_json()?;
    let back = ChannelRealization::from_json(&json)?;
    println!("dump is {} bytes, reload exact: {}", json.len(), back == ch);
    Ok(())
}
