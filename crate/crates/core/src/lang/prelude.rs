/// Declarations every program starts with. User programs may redefine the
/// operations (the user definition replaces the prelude one) but not the
/// types or constructors. `ifthen` is reserved for guard desugaring.
pub const PRELUDE: &str = "\
data Bool = False | True
data Ordering = LT | EQ | GT
data Maybe a = Nothing | Just a
data List a = Nil | Cons a (List a)
data Tuple2 a b = Tuple2 a b
ifthen :: Bool -> a -> a
ifthen True x = x
otherwise :: Bool
otherwise = True
not :: Bool -> Bool
not False = True
not True = False
id :: a -> a
id x = x
head :: [a] -> a
head (x : _) = x
tail :: [a] -> [a]
tail (_ : xs) = xs
null :: [a] -> Bool
null [] = True
null (_ : _) = False
append :: [a] -> [a] -> [a]
append [] ys = ys
append (x : xs) ys = x : append xs ys
fst :: (a, b) -> a
fst (x, _) = x
snd :: (a, b) -> b
snd (_, y) = y
";

pub const IFTHEN: &str = "ifthen";
