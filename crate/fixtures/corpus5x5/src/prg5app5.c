int gcd(int a, int b) {
    int t;
loop:
    if (b == 0)
        goto done;
    t = a % b;
    a = b;
    b = t;
    goto loop;
done:
    return a;
}
