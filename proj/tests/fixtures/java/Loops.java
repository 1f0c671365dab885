package fixtures.flow;

class Loops {
    int sumEven(int limit) {
        int total = 0, count = 0;
        for (int i = 0, j = 1; i < limit && j > 0; i++) {
            if (i % 2 == 0) {
                total += i;
                count++;
            }
        }
        for (;;) {
            break;
        }
        return total + count;
    }
}
