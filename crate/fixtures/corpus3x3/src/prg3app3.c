static void swap(char *x, char *y) {
    char t = *x;
    *x = *y;
    *y = t;
}

void reverse(char *s, int n) {
    if (n < 2)
        return;
    swap(&s[0], &s[n - 1]);
    reverse(s + 1, n - 2);
}
