# cython: boundscheck=False, wraparound=False
"""Compiled twin of ``_pykernel``; same signatures, same results."""

from cpython cimport array
from cpython.dict cimport PyDict_GetItem, PyDict_SetItem
from cpython.ref cimport PyObject
import array

BACKEND = "cython"


def intern_products(dict table, array.array left, array.array right,
                    array.array size, a_ids, b_ids):
    cdef array.array av = array.array("q", a_ids)
    cdef array.array bv = array.array("q", b_ids)
    cdef Py_ssize_t na = len(av), nb = len(bv)
    cdef Py_ssize_t n = len(left), bound = n + na * nb
    cdef Py_ssize_t i, j, k = 0
    cdef long long a, b, h, sa
    cdef PyObject *found
    cdef array.array out = array.array("q")
    array.resize(out, na * nb)
    array.resize(left, bound)
    array.resize(right, bound)
    array.resize(size, bound)
    cdef long long *pa = av.data.as_longlongs
    cdef long long *pb = bv.data.as_longlongs
    cdef long long *pl = left.data.as_longlongs
    cdef long long *pr = right.data.as_longlongs
    cdef long long *ps = size.data.as_longlongs
    cdef long long *po = out.data.as_longlongs
    for i in range(na):
        a = pa[i]
        sa = ps[a]
        for j in range(nb):
            b = pb[j]
            key = (a << 32) | b
            found = PyDict_GetItem(table, key)
            if found is NULL:
                h = n
                n += 1
                PyDict_SetItem(table, key, h)
                pl[h] = a
                pr[h] = b
                ps[h] = sa + ps[b]
            else:
                h = <object>found
            po[k] = h
            k += 1
    array.resize(left, n)
    array.resize(right, n)
    array.resize(size, n)
    return out.tolist()


def classify_range(array.array left, array.array right, array.array size,
                   array.array zflag, array.array tdepth):
    cdef Py_ssize_t start = len(zflag), stop = len(left), h
    cdef long long a, db
    array.resize(zflag, stop)
    array.resize(tdepth, stop)
    cdef long long *pl = left.data.as_longlongs
    cdef long long *pr = right.data.as_longlongs
    cdef long long *ps = size.data.as_longlongs
    cdef signed char *pz = zflag.data.as_schars
    cdef long long *pd = tdepth.data.as_longlongs
    for h in range(start, stop):
        a = pl[h]
        if a < 0:
            pz[h] = 0
            pd[h] = 0
            continue
        db = pd[pr[h]]
        pz[h] = 1 if db >= ps[a] else 0
        pd[h] = 0 if pz[a] else db + 1
