"""
Numbering expressions
=====================

Every symbol is a power of two, and a string is coded by writing the binary
forms of its symbols one after another.  This walk-through codes a few
strings by hand, decodes them back and looks at numerals.
"""
from goedel.numbering import decode, encode, numeral_code, star
from goedel import syntax as syn

# %% symbol codes, concatenated
for text in ["(", "0", "(0", "(0)", "(0)′"]:
    x = encode(text)
    print(f"{text:6} -> {x:5d} = {bin(x)}")

# star glues two codes: the binary digits of 4 followed by those of 2
print("star(4, 2) =", star(4, 2))

# %% decoding is the inverse on every code, including 0 (the empty string)
for x in [0, 18, 296, 593, 1000]:
    try:
        print(x, "->", repr(decode(x)))
    except ValueError as exc:
        print(x, "-> not a code:", exc)

# %% numerals: 0 followed by a primes has code 3·2^a − 1
for a in range(6):
    s = syn.to_symbols(syn.numeral(a))
    print(f"{s:8} {encode(s):4d} {numeral_code(a):4d}")

# %% parse, print canonically, code
f = syn.parse("a+0=a")
print(syn.print_canonical(f), encode(syn.print_canonical(f)))
