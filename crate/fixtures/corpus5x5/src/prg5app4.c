int fact(int n) {
    int f = 1;
loop:
    if (n < 2)
        goto done;
    f = f * n;
    n = n - 1;
    goto loop;
done:
    return f;
}
