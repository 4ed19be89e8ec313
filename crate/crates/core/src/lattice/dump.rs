//! CSV dumps of grid fields, one file per field.

use std::io::Write;

use super::{Grid, GridSpec};
use crate::error::Result;
use crate::su2::{CLieElement, LieElement};

fn header(out: &mut impl Write, name: &str, spec: &GridSpec) -> std::io::Result<()> {
    writeln!(
        out,
        "# field={name} t_min={} t_max={} x_half={} n_t={} n_x={}",
        spec.t_min, spec.t_max, spec.x_half, spec.n_t, spec.n_x
    )
}

pub fn write_real(out: &mut impl Write, name: &str, grid: &Grid<LieElement>) -> Result<()> {
    header(out, name, &grid.spec)?;
    writeln!(out, "t,x1,x2,c1,c2,c3")?;
    for (i, v) in grid.data.iter().enumerate() {
        let p = grid.spec.point(i);
        writeln!(out, "{},{},{},{:e},{:e},{:e}", p.t, p.z.re, p.z.im, v.c[0], v.c[1], v.c[2])?;
    }
    Ok(())
}

pub fn write_complex(out: &mut impl Write, name: &str, grid: &Grid<CLieElement>) -> Result<()> {
    header(out, name, &grid.spec)?;
    writeln!(out, "t,x1,x2,c1_re,c1_im,c2_re,c2_im,c3_re,c3_im")?;
    for (i, v) in grid.data.iter().enumerate() {
        let p = grid.spec.point(i);
        write!(out, "{},{},{}", p.t, p.z.re, p.z.im)?;
        for c in v.c {
            write!(out, ",{:e},{:e}", c.re, c.im)?;
        }
        writeln!(out)?;
    }
    Ok(())
}
