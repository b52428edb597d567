//! Binary PPM/PGM encoders. Framebuffer rows are bottom-up; images are written
//! top row first.

use super::Framebuffer;

/// Linear value to an 8-bit sRGB-style code via a 1/2.2 power.
pub fn encode_channel(linear: f64) -> u8 {
    let c = if linear.is_nan() { 0.0 } else { linear.clamp(0.0, 1.0) };
    (c.powf(1.0 / 2.2) * 255.0).round() as u8
}

pub fn encode_ppm(fb: &Framebuffer) -> Vec<u8> {
    let (w, h) = (fb.width(), fb.height());
    let mut out = format!("P6\n{w} {h}\n255\n").into_bytes();
    out.reserve(w * h * 3);
    for y in (0..h).rev() {
        for x in 0..w {
            for c in fb.color[fb.index(x, y)] {
                out.push(encode_channel(c));
            }
        }
    }
    out
}

/// Grayscale image from a bottom-up value grid. Values above 255 switch the
/// file to 16-bit big-endian samples.
pub fn encode_pgm(width: usize, height: usize, maxval: u16, value: impl Fn(usize, usize) -> u16) -> Vec<u8> {
    let maxval = maxval.max(1);
    let mut out = format!("P5\n{width} {height}\n{maxval}\n").into_bytes();
    for y in (0..height).rev() {
        for x in 0..width {
            let v = value(x, y).min(maxval);
            if maxval > 255 {
                out.extend_from_slice(&v.to_be_bytes());
            } else {
                out.push(v as u8);
            }
        }
    }
    out
}

/// Depth scaled to 16 bits.
pub fn encode_depth_pgm(fb: &Framebuffer) -> Vec<u8> {
    encode_pgm(fb.width(), fb.height(), u16::MAX, |x, y| (fb.depth[fb.index(x, y)] * 65535.0).round() as u16)
}

/// Raw stencil counts.
pub fn encode_stencil_pgm(fb: &Framebuffer) -> Vec<u8> {
    encode_stencil_values(fb.width(), fb.height(), fb.stencil_max(), &fb.stencil)
}

pub fn encode_stencil_values(width: usize, height: usize, max: u32, values: &[u32]) -> Vec<u8> {
    let maxval = max.min(u16::MAX as u32) as u16;
    encode_pgm(width, height, maxval, |x, y| values[y * width + x].min(u16::MAX as u32) as u16)
}
