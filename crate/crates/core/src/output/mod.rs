//! CSV and SVG emitters for cycles, trajectories and sweeps.

mod csv_io;
mod svg;

pub use csv_io::{
    contact_rows, cycle_rows, fmt_f64, read_point_rows, read_sweep_rows, sweep_rows, trajectory_rows,
    write_point_rows, write_sweep_rows, PointRow, Role, SweepRow,
};
pub use svg::{escape, SvgPlot, HEIGHT, WIDTH};
