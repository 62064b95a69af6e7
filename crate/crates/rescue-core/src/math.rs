//! Float math shim: `std` intrinsics when available, `libm` otherwise.

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("rescue-core needs float math: enable the `std` feature (default) or `libm`");

macro_rules! unary {
    ($name:ident) => {
        #[inline]
        pub(crate) fn $name(x: f64) -> f64 {
            #[cfg(feature = "std")]
            {
                x.$name()
            }
            #[cfg(all(not(feature = "std"), feature = "libm"))]
            {
                libm::$name(x)
            }
        }
    };
}

unary!(sqrt);
unary!(sin);
unary!(cos);
unary!(tan);
unary!(floor);
unary!(ceil);

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.ln()
    }
    #[cfg(all(not(feature = "std"), feature = "libm"))]
    {
        libm::log(x)
    }
}

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    // `f64::abs` is in core since 1.84 behind `std`-independent intrinsics on
    // recent toolchains, but spelling it out keeps the MSRV story simple.
    f64::from_bits(x.to_bits() & !(1u64 << 63))
}

#[inline]
pub(crate) fn atan2(y: f64, x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        y.atan2(x)
    }
    #[cfg(all(not(feature = "std"), feature = "libm"))]
    {
        libm::atan2(y, x)
    }
}
