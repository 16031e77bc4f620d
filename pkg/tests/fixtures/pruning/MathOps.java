package com.example.math;
class MathOps {
    static int keepFirst(int x, int y) {
        int t = x + 1;
        return t;
    }
    static int identity(int x) {
        return x;
    }
    static int caller(int p, int q) {
        int a = p * 2;
        int b = q * 3;
        int r = keepFirst(a, b);
        return r + b;
    }
    static int clean(int p, int q) {
        int a = identity(p);
        int b = identity(q);
        return a + b;
    }
    static int constant(int m, int n) {
        return 42;
    }
    static int caller2(int p) {
        int u = p + 1;
        int w = p + 2;
        int r = constant(u, w);
        return r + p;
    }
}
