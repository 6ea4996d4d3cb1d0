int gcd(int a, int b) {
    for (int t; b != 0; ) {
        t = a % b;
        a = b;
        b = t;
    }
    return a;
}
