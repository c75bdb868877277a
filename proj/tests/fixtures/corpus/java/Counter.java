public class Counter {
    private int value;

    void increment() {
        value++;
    }

    int get() {
        return value;
    }

    public static void main(String[] args) {
        Counter counter = new Counter();
        for (String arg : args) {
            if (!arg.isEmpty()) {
                counter.increment();
            }
        }
        System.out.println(counter.get());
    }
}
