/// Derives the owned/mixed-ownership variants of a binary operator from the
/// `&T op &T` implementation.
macro_rules! forward_binop {
    ($ty:ident, $tr:ident, $method:ident) => {
        impl<K: $crate::exact::Scalar> std::ops::$tr<$ty<K>> for $ty<K> {
            type Output = $ty<K>;
            fn $method(self, rhs: $ty<K>) -> $ty<K> {
                std::ops::$tr::$method(&self, &rhs)
            }
        }
        impl<K: $crate::exact::Scalar> std::ops::$tr<&$ty<K>> for $ty<K> {
            type Output = $ty<K>;
            fn $method(self, rhs: &$ty<K>) -> $ty<K> {
                std::ops::$tr::$method(&self, rhs)
            }
        }
        impl<K: $crate::exact::Scalar> std::ops::$tr<$ty<K>> for &$ty<K> {
            type Output = $ty<K>;
            fn $method(self, rhs: $ty<K>) -> $ty<K> {
                std::ops::$tr::$method(self, &rhs)
            }
        }
    };
}

macro_rules! forward_neg {
    ($ty:ident) => {
        impl<K: $crate::exact::Scalar> std::ops::Neg for $ty<K> {
            type Output = $ty<K>;
            fn neg(self) -> $ty<K> {
                -&self
            }
        }
    };
}
