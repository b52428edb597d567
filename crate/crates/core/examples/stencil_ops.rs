//! Wrapping versus saturating stencil arithmetic on a single 3-bit value.

use shadowvol::raster::StencilOp;

fn run(ops: &[StencilOp], max: u32) -> (u32, usize) {
    let mut v = 0;
    let mut clamps = 0;
    for op in ops {
        let (next, clamped) = op.apply(v, max);
        v = next;
        clamps += clamped as usize;
    }
    (v, clamps)
}

fn main() {
    let max = 7;
    // nine volumes entered, then three left
    let mut wrap = vec![StencilOp::IncrWrap; 9];
    wrap.extend([StencilOp::DecrWrap; 3]);
    let mut sat = vec![StencilOp::Incr; 9];
    sat.extend([StencilOp::Decr; 3]);

    let (w, _) = run(&wrap, max);
    let (s, clamps) = run(&sat, max);
    println!("true count 6 with {} bits", max.count_ones());
    println!("wrapping:   {w}  (9 - 3 mod 8)");
    println!("saturating: {s}  ({clamps} increments lost at the top)");

    // decrement first, as happens when back faces are drawn before front faces
    let (w, _) = run(&[StencilOp::DecrWrap, StencilOp::DecrWrap, StencilOp::IncrWrap, StencilOp::IncrWrap], max);
    let (s, clamps) = run(&[StencilOp::Decr, StencilOp::Decr, StencilOp::Incr, StencilOp::Incr], max);
    println!("\ndecrements before increments, true count 0");
    println!("wrapping:   {w}");
    println!("saturating: {s}  ({clamps} decrements lost at zero)");
}
