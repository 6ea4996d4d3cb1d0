void reverse(char *s, int n) {
    char *lo = s;
    char *hi = s + n - 1;
    while (lo < hi) {
        char t = *lo;
        *lo = *hi;
        *hi = t;
        lo++;
        hi--;
    }
}
